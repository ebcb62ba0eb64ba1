"""
Differentiable operators.

Each op computes its forward value with numpy and records a closure returning
the gradient for each input. Broadcasting is limited to bias vectors over the
last axis and scalar factors.
"""
import math
from typing import Optional, Sequence

import numpy as np
from scipy.special import erf

from .exceptions import AllMaskedRow, AutodiffError, ShapeMismatch
from .tensor import Tensor, as_tensor

LAYER_NORM_EPS = 1e-5
_INV_SQRT2 = 1.0 / math.sqrt(2.0)
_INV_SQRT2PI = 1.0 / math.sqrt(2.0 * math.pi)


def _sum_to_bias(grad: np.ndarray) -> np.ndarray:
    return grad.reshape(-1, grad.shape[-1]).sum(axis=0)


def add(a, b) -> Tensor:
    """Elementwise sum of equal shapes, or a plus a bias vector over its last axis."""
    a, b = as_tensor(a), as_tensor(b)
    if a.shape == b.shape:
        return Tensor.from_op(a.data + b.data, "add", (a, b), lambda g: (g, g))
    if b.ndim == 1 and a.ndim >= 1 and b.shape[0] == a.shape[-1]:
        return Tensor.from_op(a.data + b.data, "add_bias", (a, b), lambda g: (g, _sum_to_bias(g)))
    raise ShapeMismatch(f"Cannot add shapes {a.shape} and {b.shape}")


def scale(a, factor: float) -> Tensor:
    a = as_tensor(a)
    factor = float(factor)
    return Tensor.from_op(a.data * factor, "scale", (a,), lambda g: (g * factor,))


def matmul(a, b) -> Tensor:
    """
    a [..., n, k] @ b [k, m] (shared weight), or a [..., n, k] @ b [..., k, m]
    with identical leading axes.
    """
    a, b = as_tensor(a), as_tensor(b)
    if a.ndim < 2 or b.ndim < 2 or a.shape[-1] != b.shape[-2]:
        raise ShapeMismatch(f"Cannot multiply shapes {a.shape} and {b.shape}")
    if b.ndim == 2:
        def backward(g):
            grad_b = a.data.reshape(-1, a.shape[-1]).T @ g.reshape(-1, g.shape[-1])
            return g @ b.data.T, grad_b

        return Tensor.from_op(a.data @ b.data, "matmul", (a, b), backward)
    if a.shape[:-2] != b.shape[:-2]:
        raise ShapeMismatch(f"Batched matmul needs equal leading axes, got {a.shape} and {b.shape}")

    def backward(g):
        return g @ np.swapaxes(b.data, -1, -2), np.swapaxes(a.data, -1, -2) @ g

    return Tensor.from_op(a.data @ b.data, "bmm", (a, b), backward)


def transpose_last2(a) -> Tensor:
    a = as_tensor(a)
    if a.ndim < 2:
        raise ShapeMismatch(f"Need at least 2 axes to transpose, got {a.shape}")
    return Tensor.from_op(
        np.swapaxes(a.data, -1, -2), "transpose", (a,), lambda g: (np.swapaxes(g, -1, -2),)
    )


def concat_last_dim(tensors: Sequence) -> Tensor:
    tensors = [as_tensor(t) for t in tensors]
    leading = {t.shape[:-1] for t in tensors}
    if len(leading) != 1:
        raise ShapeMismatch(f"Cannot concatenate shapes {[t.shape for t in tensors]}")
    bounds = np.cumsum([0] + [t.shape[-1] for t in tensors])

    def backward(g):
        return tuple(g[..., bounds[i]:bounds[i + 1]] for i in range(len(tensors)))

    return Tensor.from_op(
        np.concatenate([t.data for t in tensors], axis=-1), "concat", tuple(tensors), backward
    )


def split_heads(x, n_heads: int) -> Tensor:
    """[B, N, d] -> [B, H, N, d/H]."""
    x = as_tensor(x)
    if x.ndim != 3 or x.shape[-1] % n_heads:
        raise ShapeMismatch(f"Cannot split shape {x.shape} into {n_heads} heads")
    batch, length, width = x.shape
    head = width // n_heads
    out = x.data.reshape(batch, length, n_heads, head).transpose(0, 2, 1, 3)
    return Tensor.from_op(
        out, "split_heads", (x,), lambda g: (g.transpose(0, 2, 1, 3).reshape(batch, length, width),)
    )


def merge_heads(x) -> Tensor:
    """[B, H, N, k] -> [B, N, H*k]."""
    x = as_tensor(x)
    if x.ndim != 4:
        raise ShapeMismatch(f"Expected [B, H, N, k], got {x.shape}")
    batch, heads, length, head = x.shape
    out = x.data.transpose(0, 2, 1, 3).reshape(batch, length, heads * head)
    return Tensor.from_op(
        out,
        "merge_heads",
        (x,),
        lambda g: (g.reshape(batch, length, heads, head).transpose(0, 2, 1, 3),),
    )


def relu(x) -> Tensor:
    x = as_tensor(x)
    active = x.data > 0
    return Tensor.from_op(np.where(active, x.data, 0.0), "relu", (x,), lambda g: (g * active,))


def gelu(x) -> Tensor:
    """x * Phi(x) with the exact Gaussian CDF."""
    x = as_tensor(x)
    cdf = 0.5 * (1.0 + erf(x.data * _INV_SQRT2))
    pdf = _INV_SQRT2PI * np.exp(-0.5 * x.data ** 2)
    return Tensor.from_op(x.data * cdf, "gelu", (x,), lambda g: (g * (cdf + x.data * pdf),))


def softmax_last_dim_masked(logits, mask: Optional[np.ndarray] = None) -> Tensor:
    """
    Softmax over the last axis; positions with mask 0 get probability exactly 0.

    Raises:
        AllMaskedRow: if a row has no live position
    """
    logits = as_tensor(logits)
    if mask is None:
        live = np.ones(logits.shape, dtype=bool)
    else:
        try:
            live = np.broadcast_to(np.asarray(mask) > 0, logits.shape)
        except ValueError:
            raise ShapeMismatch(f"Mask shape {np.shape(mask)} does not fit logits {logits.shape}") from None
    if not np.all(live.any(axis=-1)):
        raise AllMaskedRow("Masked softmax row has no live position")
    shifted = np.where(live, logits.data, -np.inf)
    shifted = shifted - shifted.max(axis=-1, keepdims=True)
    weights = np.where(live, np.exp(shifted), 0.0)
    probs = weights / weights.sum(axis=-1, keepdims=True)

    def backward(g):
        return (probs * (g - np.sum(g * probs, axis=-1, keepdims=True)),)

    return Tensor.from_op(probs, "softmax", (logits,), backward)


def log_softmax(logits) -> Tensor:
    logits = as_tensor(logits)
    shifted = logits.data - logits.data.max(axis=-1, keepdims=True)
    log_probs = shifted - np.log(np.exp(shifted).sum(axis=-1, keepdims=True))
    probs = np.exp(log_probs)

    def backward(g):
        return (g - probs * g.sum(axis=-1, keepdims=True),)

    return Tensor.from_op(log_probs, "log_softmax", (logits,), backward)


def layer_norm(x, gamma, beta, eps: float = LAYER_NORM_EPS) -> Tensor:
    """Normalize over the last axis, then scale by gamma and shift by beta."""
    x, gamma, beta = as_tensor(x), as_tensor(gamma), as_tensor(beta)
    width = x.shape[-1]
    if gamma.shape != (width,) or beta.shape != (width,):
        raise ShapeMismatch(f"Affine parameters must have shape ({width},)")
    mean = x.data.mean(axis=-1, keepdims=True)
    centered = x.data - mean
    inv_std = 1.0 / np.sqrt((centered ** 2).mean(axis=-1, keepdims=True) + eps)
    normed = centered * inv_std

    def backward(g):
        d_normed = g * gamma.data
        d_x = inv_std * (
            d_normed
            - d_normed.mean(axis=-1, keepdims=True)
            - normed * (d_normed * normed).mean(axis=-1, keepdims=True)
        )
        return d_x, _sum_to_bias(g * normed), _sum_to_bias(g)

    return Tensor.from_op(normed * gamma.data + beta.data, "layer_norm", (x, gamma, beta), backward)


def dropout(x, p: float, train: bool, seed: Optional[int] = None) -> Tensor:
    """Inverted dropout; the identity in eval mode or when p is 0."""
    x = as_tensor(x)
    if not 0.0 <= p < 1.0:
        raise AutodiffError(f"Dropout rate must be in [0, 1), got {p}")
    if not train or p == 0.0:
        return x
    keep = (np.random.default_rng(seed).random(x.shape) >= p) / (1.0 - p)
    return Tensor.from_op(x.data * keep, "dropout", (x,), lambda g: (g * keep,))


def _live_weights(mask: np.ndarray, shape) -> np.ndarray:
    weights = np.asarray(mask, dtype=np.float64)
    if weights.shape != shape[:2]:
        raise ShapeMismatch(f"Mask shape {weights.shape} does not match tokens {shape}")
    if not np.all(weights.sum(axis=1) > 0):
        raise AllMaskedRow("Masked pooling row has no live token")
    return weights


def sum_masked(x, mask: np.ndarray) -> Tensor:
    """[B, N, d] -> [B, d], summing live tokens only."""
    x = as_tensor(x)
    if x.ndim != 3:
        raise ShapeMismatch(f"Expected [B, N, d], got {x.shape}")
    weights = _live_weights(mask, x.shape)
    out = np.einsum("bn,bnd->bd", weights, x.data)
    return Tensor.from_op(out, "sum_masked", (x,), lambda g: (weights[:, :, None] * g[:, None, :],))


def mean_masked(x, mask: np.ndarray) -> Tensor:
    """[B, N, d] -> [B, d], averaging live tokens only."""
    x = as_tensor(x)
    if x.ndim != 3:
        raise ShapeMismatch(f"Expected [B, N, d], got {x.shape}")
    weights = _live_weights(mask, x.shape)
    weights = weights / weights.sum(axis=1, keepdims=True)
    out = np.einsum("bn,bnd->bd", weights, x.data)
    return Tensor.from_op(out, "mean_masked", (x,), lambda g: (weights[:, :, None] * g[:, None, :],))


def linear(x, weight, bias=None) -> Tensor:
    out = matmul(x, weight)
    return out if bias is None else add(out, bias)


def cross_entropy_with_logits(logits, labels) -> Tensor:
    """Mean negative log-likelihood of integer labels under softmax(logits)."""
    logits = as_tensor(logits)
    labels = np.asarray(labels, dtype=np.int64)
    if logits.ndim != 2 or labels.shape != (logits.shape[0],):
        raise ShapeMismatch(f"Expected logits [B, C] and labels [B], got {logits.shape} and {labels.shape}")
    if labels.size and (labels.min() < 0 or labels.max() >= logits.shape[1]):
        raise ShapeMismatch(f"Labels must lie in 0..{logits.shape[1] - 1}")
    batch = logits.shape[0]
    shifted = logits.data - logits.data.max(axis=1, keepdims=True)
    log_probs = shifted - np.log(np.exp(shifted).sum(axis=1, keepdims=True))
    loss = -log_probs[np.arange(batch), labels].mean()

    def backward(g):
        grad = np.exp(log_probs)
        grad[np.arange(batch), labels] -= 1.0
        return (grad * (g / batch),)

    return Tensor.from_op(np.asarray(loss, dtype=logits.data.dtype), "cross_entropy", (logits,), backward)


def mse(prediction, target) -> Tensor:
    prediction, target = as_tensor(prediction), as_tensor(target)
    if prediction.shape != target.shape:
        raise ShapeMismatch(f"Cannot compare shapes {prediction.shape} and {target.shape}")
    diff = prediction.data - target.data
    count = diff.size

    def backward(g):
        grad = (2.0 / count) * g * diff
        return grad, -grad

    return Tensor.from_op(
        np.asarray(np.mean(diff ** 2), dtype=prediction.data.dtype), "mse", (prediction, target), backward
    )


def gather_last(x, index) -> Tensor:
    """Pick x[b, index[b]] from a [B, C] tensor."""
    x = as_tensor(x)
    index = np.asarray(index, dtype=np.int64)
    if x.ndim != 2 or index.shape != (x.shape[0],):
        raise ShapeMismatch(f"Cannot gather {index.shape} from {x.shape}")
    rows = np.arange(x.shape[0])

    def backward(g):
        grad = np.zeros_like(x.data)
        grad[rows, index] = g
        return (grad,)

    return Tensor.from_op(x.data[rows, index], "gather", (x,), backward)


def total(x) -> Tensor:
    """Sum of all elements as a scalar tensor."""
    x = as_tensor(x)
    return Tensor.from_op(
        np.asarray(x.data.sum(), dtype=x.data.dtype), "sum", (x,), lambda g: (np.broadcast_to(g, x.shape).copy(),)
    )


def reshape(x, shape) -> Tensor:
    x = as_tensor(x)
    try:
        out = x.data.reshape(shape)
    except ValueError:
        raise ShapeMismatch(f"Cannot reshape {x.shape} to {shape}") from None
    return Tensor.from_op(out, "reshape", (x,), lambda g: (g.reshape(x.shape),))


def expand_batch(x, batch: int) -> Tensor:
    """Repeat a [1, ...] tensor along a new leading batch axis: -> [batch, 1, ...]."""
    x = as_tensor(x)
    out = np.broadcast_to(x.data, (batch,) + x.shape).copy()
    return Tensor.from_op(out, "expand_batch", (x,), lambda g: (g.sum(axis=0),))
