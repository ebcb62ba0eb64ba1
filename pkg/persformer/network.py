"""
The Persformer: a position-wise embedding, stacked masked multi-head
self-attention layers with residual connections, multi-head attention pooling
with a single learned query, and an MLP decoder.

No positional information enters anywhere, so the network is a permutation
invariant function of the live points of a diagram.
"""
import logging
import math
from typing import List, Optional, Union

import numpy as np

from autodiff import ops
from autodiff.exceptions import ShapeMismatch
from autodiff.tensor import Tensor, as_tensor

from .models import Activation, ModelState, PersformerConfig, Pooling

logger = logging.getLogger(__name__)

ArrayOrTensor = Union[np.ndarray, Tensor]


def _uniform(rng: np.random.Generator, fan_in: int, shape) -> np.ndarray:
    bound = 1.0 / math.sqrt(fan_in)
    return rng.uniform(-bound, bound, size=shape)


def init_state(config: PersformerConfig, seed: int = 0) -> ModelState:
    """Fan-in scaled uniform weights, unit layer norms and a zero pooling query."""
    rng = np.random.default_rng(seed)
    d = config.hidden_dim
    arrays = {
        "embed.W": _uniform(rng, config.input_dim, (config.input_dim, d)),
        "embed.b": _uniform(rng, config.input_dim, (d,)),
    }
    for i in range(config.n_layers):
        prefix = f"layers.{i}"
        for name in ("W_Q", "W_K", "W_V", "W_O"):
            arrays[f"{prefix}.attn.{name}"] = _uniform(rng, d, (d, d))
        arrays[f"{prefix}.ln1.gamma"] = np.ones(d)
        arrays[f"{prefix}.ln1.beta"] = np.zeros(d)
        arrays[f"{prefix}.ffn.W1"] = _uniform(rng, d, (d, config.ffn_width))
        arrays[f"{prefix}.ffn.b1"] = _uniform(rng, d, (config.ffn_width,))
        arrays[f"{prefix}.ffn.W2"] = _uniform(rng, config.ffn_width, (config.ffn_width, d))
        arrays[f"{prefix}.ffn.b2"] = _uniform(rng, config.ffn_width, (d,))
        arrays[f"{prefix}.ln2.gamma"] = np.ones(d)
        arrays[f"{prefix}.ln2.beta"] = np.zeros(d)
    arrays["pool.query"] = np.zeros((1, d))
    arrays["pool.W_K"] = _uniform(rng, d, (d, d))
    arrays["pool.W_V"] = _uniform(rng, d, (d, d))
    widths = config.decoder_layers
    for k, (fan_in, fan_out) in enumerate(zip(widths[:-1], widths[1:])):
        arrays[f"decoder.{k}.W"] = _uniform(rng, fan_in, (fan_in, fan_out))
        arrays[f"decoder.{k}.b"] = _uniform(rng, fan_in, (fan_out,))
    return ModelState.from_arrays(arrays)


def deep_sets_mode(state: ModelState) -> ModelState:
    """
    Copy of the state with every attention score and attention output switched off.

    W_Q, W_K and the pooling query become zero, so every softmax is uniform over
    live tokens; W_O becomes zero, so each layer reduces to its position-wise
    feed-forward block and pooling to a masked mean of value projections.
    """
    arrays = state.arrays()
    for name in arrays:
        if name.endswith((".attn.W_Q", ".attn.W_K", ".attn.W_O")) or name == "pool.query":
            arrays[name] = np.zeros_like(arrays[name])
    return ModelState.from_arrays(arrays)


def attention_scores(query: ArrayOrTensor, keys: ArrayOrTensor, mask: Optional[np.ndarray], scale: float) -> Tensor:
    """softmax(query keys^T * scale) with masked keys at probability exactly 0."""
    logits = ops.scale(ops.matmul(as_tensor(query), ops.transpose_last2(as_tensor(keys))), scale)
    return ops.softmax_last_dim_masked(logits, mask)


class Persformer:
    """Forward computation of a configured model over its parameter state."""

    def __init__(self, config: PersformerConfig, state: Optional[ModelState] = None, seed: int = 0):
        self.config = config
        self.state = state if state is not None else init_state(config, seed)

    @property
    def head_scale(self) -> float:
        return 1.0 / math.sqrt(self.config.hidden_dim / self.config.n_heads)

    def _activation(self, x: Tensor) -> Tensor:
        return ops.gelu(x) if self.config.activation is Activation.GELU else ops.relu(x)

    def embed(self, features: ArrayOrTensor) -> Tensor:
        """[B, N, F] -> [B, N, d], the same affine map at every position."""
        features = as_tensor(features)
        if features.ndim != 3 or features.shape[-1] != self.config.input_dim:
            raise ShapeMismatch(
                f"Expected features [B, N, {self.config.input_dim}], got {features.shape}"
            )
        return ops.linear(features, self.state["embed.W"], self.state["embed.b"])

    def _multi_head(self, x: Tensor, mask: np.ndarray, prefix: str) -> Tensor:
        heads = self.config.n_heads
        q = ops.split_heads(ops.matmul(x, self.state[f"{prefix}.W_Q"]), heads)
        k = ops.split_heads(ops.matmul(x, self.state[f"{prefix}.W_K"]), heads)
        v = ops.split_heads(ops.matmul(x, self.state[f"{prefix}.W_V"]), heads)
        scores = attention_scores(q, k, mask[:, None, None, :], self.head_scale)
        return ops.matmul(ops.merge_heads(ops.matmul(scores, v)), self.state[f"{prefix}.W_O"])

    def self_attention_layer(self, x: Tensor, mask: np.ndarray, index: int) -> Tensor:
        """Post-norm transformer layer; padded tokens are never attended to."""
        prefix = f"layers.{index}"
        attended = self._multi_head(x, mask, f"{prefix}.attn")
        x = ops.add(x, attended) if self.config.use_residual else attended
        if self.config.use_layer_norm:
            x = ops.layer_norm(x, self.state[f"{prefix}.ln1.gamma"], self.state[f"{prefix}.ln1.beta"])
        hidden = self._activation(ops.linear(x, self.state[f"{prefix}.ffn.W1"], self.state[f"{prefix}.ffn.b1"]))
        transformed = ops.linear(hidden, self.state[f"{prefix}.ffn.W2"], self.state[f"{prefix}.ffn.b2"])
        x = ops.add(x, transformed) if self.config.use_residual else transformed
        if self.config.use_layer_norm:
            x = ops.layer_norm(x, self.state[f"{prefix}.ln2.gamma"], self.state[f"{prefix}.ln2.beta"])
        return x

    def encode(self, features: ArrayOrTensor, mask: np.ndarray) -> Tensor:
        x = self.embed(features)
        for index in range(self.config.n_layers):
            x = self.self_attention_layer(x, mask, index)
        return x

    def attention_pool(self, x: Tensor, mask: np.ndarray) -> Tensor:
        """[B, N, d] -> [B, d] (or [B, 2d] with sum pooling appended)."""
        batch, _, d = x.shape
        heads = self.config.n_heads
        query = ops.split_heads(ops.expand_batch(self.state["pool.query"], batch), heads)
        keys = ops.split_heads(ops.matmul(x, self.state["pool.W_K"]), heads)
        values = ops.split_heads(ops.matmul(x, self.state["pool.W_V"]), heads)
        scores = attention_scores(query, keys, mask[:, None, None, :], self.head_scale)
        pooled = ops.reshape(ops.merge_heads(ops.matmul(scores, values)), (batch, d))
        if self.config.pooling is Pooling.ATTENTION_PLUS_SUM:
            pooled = ops.concat_last_dim([pooled, ops.sum_masked(x, mask)])
        return pooled

    def decode(self, pooled: Tensor, train: bool = False, seed: Optional[int] = None) -> Tensor:
        n_linear = len(self.config.decoder_layers) - 1
        x = pooled
        for k in range(n_linear):
            x = ops.linear(x, self.state[f"decoder.{k}.W"], self.state[f"decoder.{k}.b"])
            if k < n_linear - 1:
                x = self._activation(x)
                layer_seed = None if seed is None else seed + k
                x = ops.dropout(x, self.config.dropout_decoder, train, layer_seed)
        return x

    def forward(
        self,
        features: ArrayOrTensor,
        mask: np.ndarray,
        train: bool = False,
        seed: Optional[int] = None,
    ) -> Tensor:
        """Logits [B, C] for padded features [B, N, F] and live mask [B, N]."""
        mask = np.asarray(mask, dtype=np.float64)
        x = self.encode(features, mask)
        return self.decode(self.attention_pool(x, mask), train=train, seed=seed)

    __call__ = forward

    def predict(self, features: np.ndarray, mask: np.ndarray) -> np.ndarray:
        return self.forward(features, mask, train=False).data

    def parameters(self) -> List[Tensor]:
        return list(self.state.parameters.values())
