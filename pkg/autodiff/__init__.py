"""
Reverse-mode automatic differentiation over numpy arrays.
"""
from .checkpoint import load_parameters, save_parameters
from .ops import (
    add,
    concat_last_dim,
    cross_entropy_with_logits,
    dropout,
    expand_batch,
    gather_last,
    gelu,
    layer_norm,
    linear,
    log_softmax,
    matmul,
    mean_masked,
    merge_heads,
    mse,
    relu,
    reshape,
    scale,
    softmax_last_dim_masked,
    split_heads,
    sum_masked,
    total,
    transpose_last2,
)
from .tensor import TapeNode, Tensor, as_tensor, backward

__all__ = [
    "TapeNode",
    "Tensor",
    "add",
    "as_tensor",
    "backward",
    "concat_last_dim",
    "cross_entropy_with_logits",
    "dropout",
    "expand_batch",
    "gather_last",
    "gelu",
    "layer_norm",
    "linear",
    "load_parameters",
    "log_softmax",
    "matmul",
    "mean_masked",
    "merge_heads",
    "mse",
    "relu",
    "reshape",
    "save_parameters",
    "scale",
    "softmax_last_dim_masked",
    "split_heads",
    "sum_masked",
    "total",
    "transpose_last2",
]
