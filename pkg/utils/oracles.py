"""
Slow reference implementations the tests compare the toolkit against.

Nothing here is used by the toolkit itself: every oracle recomputes its answer
from first principles (enumeration, dense linear algebra, straight-line loops).
"""
import math
from itertools import permutations
from typing import Callable, Dict, Iterator, List, Mapping, Sequence, Tuple

import numpy as np
from scipy.special import erf

from diagrams.matching import diagonal_distance, p_norm, point_distance
from diagrams.models import PersistenceDiagram
from persistence.models import Simplex


# Exhaustive matchings

def _partial_matchings(
    keys_a: Sequence, keys_b: Sequence, start: int = 0, used: Tuple[int, ...] = ()
) -> Iterator[List[Tuple[int, int]]]:
    """Every matching between equal-key points; unlisted points go to the diagonal."""
    if start == len(keys_a):
        yield []
        return
    for rest in _partial_matchings(keys_a, keys_b, start + 1, used):
        yield rest
    for j, key in enumerate(keys_b):
        if j not in used and key == keys_a[start]:
            for rest in _partial_matchings(keys_a, keys_b, start + 1, used + (j,)):
                yield [(start, j)] + rest


def brute_force_diagonal_wasserstein(
    first: PersistenceDiagram, second: PersistenceDiagram, ps: Sequence[float]
) -> Dict[float, float]:
    """Minimum over all partial matchings of the p-norm of the edge costs, per p."""
    a, b = first.coordinates(), second.coordinates()
    best = {p: math.inf for p in ps}
    for pairs in _partial_matchings(first.keys(), second.keys()):
        matched_a = {i for i, _ in pairs}
        matched_b = {j for _, j in pairs}
        costs = [point_distance(a[i], b[j]) for i, j in pairs]
        costs += [diagonal_distance(a[i]) for i in range(len(a)) if i not in matched_a]
        costs += [diagonal_distance(b[j]) for j in range(len(b)) if j not in matched_b]
        for p in ps:
            best[p] = min(best[p], p_norm(costs, p))
    return best


def brute_force_wasserstein(
    first: PersistenceDiagram, second: PersistenceDiagram, ps: Sequence[float]
) -> Dict[float, float]:
    """Minimum over all bijections; key-violating bijections cost +inf."""
    a, b = first.coordinates(), second.coordinates()
    keys_a, keys_b = first.keys(), second.keys()
    best = {p: math.inf for p in ps}
    for order in permutations(range(len(b))):
        if any(keys_a[i] != keys_b[j] for i, j in enumerate(order)):
            continue
        costs = [point_distance(a[i], b[j]) for i, j in enumerate(order)]
        for p in ps:
            best[p] = min(best[p], p_norm(costs, p))
    return best


# Dense homology over Z/2

def rank_mod2(matrix: np.ndarray) -> int:
    work = (np.asarray(matrix) % 2).astype(np.uint8)
    rank = 0
    rows, cols = work.shape
    for col in range(cols):
        pivot = next((r for r in range(rank, rows) if work[r, col]), None)
        if pivot is None:
            continue
        work[[rank, pivot]] = work[[pivot, rank]]
        for r in range(rows):
            if r != rank and work[r, col]:
                work[r] ^= work[rank]
        rank += 1
        if rank == rows:
            break
    return rank


def _boundary(rows: Sequence[Tuple[int, ...]], cols: Sequence[Tuple[int, ...]]) -> np.ndarray:
    index = {s: i for i, s in enumerate(rows)}
    matrix = np.zeros((len(rows), len(cols)), dtype=np.uint8)
    for c, simplex in enumerate(cols):
        for k in range(len(simplex)):
            matrix[index[simplex[:k] + simplex[k + 1:]], c] = 1
    return matrix


def betti_numbers(simplices: Sequence[Simplex], threshold: float) -> Tuple[int, int]:
    """(b0, b1) of the subcomplex of simplices with value <= threshold."""
    alive = [s for s in simplices if s.filtration_value <= threshold]
    by_dim = [[s.vertices for s in alive if s.dim == d] for d in range(3)]
    rank1 = rank_mod2(_boundary(by_dim[0], by_dim[1])) if by_dim[1] else 0
    rank2 = rank_mod2(_boundary(by_dim[1], by_dim[2])) if by_dim[2] else 0
    return len(by_dim[0]) - rank1, len(by_dim[1]) - rank1 - rank2


# Finite differences

def central_difference(fn: Callable[[np.ndarray], float], x: np.ndarray, h: float = 1e-6) -> np.ndarray:
    """Gradient of a scalar function by central differences, one coordinate at a time."""
    x = np.array(x, dtype=np.float64)
    grad = np.zeros_like(x)
    for index in np.ndindex(x.shape):
        original = x[index]
        x[index] = original + h
        upper = fn(x)
        x[index] = original - h
        lower = fn(x)
        x[index] = original
        grad[index] = (upper - lower) / (2.0 * h)
    return grad


# Straight-line Deep Sets evaluation

def _layer_norm(row: np.ndarray, gamma: np.ndarray, beta: np.ndarray, eps: float = 1e-5) -> np.ndarray:
    centered = row - row.mean()
    return centered / math.sqrt((centered ** 2).mean() + eps) * gamma + beta


def _activate(x: np.ndarray, name: str) -> np.ndarray:
    if name == "relu":
        return np.maximum(x, 0.0)
    return 0.5 * x * (1.0 + erf(x / math.sqrt(2.0)))


def deep_sets_forward(config, params: Mapping[str, np.ndarray], vectors: np.ndarray) -> np.ndarray:
    """
    Output of a model in Deep Sets mode on one diagram, point by point.

    Every token goes through the per-layer feed-forward blocks on its own (the
    attention sublayer contributes nothing), pooling is the mean of the value
    projections, optionally followed by the token sum.
    """
    activation = getattr(config.activation, "value", config.activation)
    tokens = []
    for vector in np.asarray(vectors, dtype=np.float64):
        x = vector @ params["embed.W"] + params["embed.b"]
        for i in range(config.n_layers):
            prefix = f"layers.{i}"
            if not config.use_residual:
                x = np.zeros_like(x)
            if config.use_layer_norm:
                x = _layer_norm(x, params[f"{prefix}.ln1.gamma"], params[f"{prefix}.ln1.beta"])
            hidden = _activate(x @ params[f"{prefix}.ffn.W1"] + params[f"{prefix}.ffn.b1"], activation)
            transformed = hidden @ params[f"{prefix}.ffn.W2"] + params[f"{prefix}.ffn.b2"]
            x = x + transformed if config.use_residual else transformed
            if config.use_layer_norm:
                x = _layer_norm(x, params[f"{prefix}.ln2.gamma"], params[f"{prefix}.ln2.beta"])
        tokens.append(x)
    tokens = np.array(tokens)
    pooled = np.mean(tokens @ params["pool.W_V"], axis=0)
    if getattr(config.pooling, "value", config.pooling) == "attention_plus_sum":
        pooled = np.concatenate([pooled, tokens.sum(axis=0)])
    n_linear = len(config.decoder_layers) - 1
    out = pooled
    for k in range(n_linear):
        out = out @ params[f"decoder.{k}.W"] + params[f"decoder.{k}.b"]
        if k < n_linear - 1:
            out = _activate(out, activation)
    return out


# Plain Adam

def plain_adamw(
    params: Mapping[str, np.ndarray],
    grad_sequence: Sequence[Mapping[str, np.ndarray]],
    lr: float,
    betas: Tuple[float, float] = (0.9, 0.999),
    eps: float = 1e-8,
    weight_decay: float = 0.0,
) -> Dict[str, np.ndarray]:
    """Textbook AdamW, scalar by scalar, over a fixed sequence of gradients."""
    beta1, beta2 = betas
    result = {}
    for name, value in params.items():
        flat = np.array(value, dtype=np.float64).ravel()
        m = [0.0] * flat.size
        v = [0.0] * flat.size
        for t, grads in enumerate(grad_sequence, start=1):
            g = np.asarray(grads[name], dtype=np.float64).ravel()
            for k in range(flat.size):
                m[k] = beta1 * m[k] + (1 - beta1) * g[k]
                v[k] = beta2 * v[k] + (1 - beta2) * g[k] ** 2
                m_hat = m[k] / (1 - beta1 ** t)
                v_hat = v[k] / (1 - beta2 ** t)
                flat[k] = flat[k] - lr * weight_decay * flat[k]
                flat[k] = flat[k] - lr * m_hat / (math.sqrt(v_hat) + eps)
        result[name] = flat.reshape(np.shape(value))
    return result
