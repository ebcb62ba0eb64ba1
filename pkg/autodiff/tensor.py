"""
Tensors that record the operations producing them, and the reverse pass.
"""
import logging
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from config import settings

from .exceptions import NotScalar

logger = logging.getLogger(__name__)

BackwardFn = Callable[[np.ndarray], Sequence[Optional[np.ndarray]]]


def default_dtype() -> np.dtype:
    return np.dtype(settings.default_dtype)


@dataclass(frozen=True)
class TapeNode:
    """How a tensor was produced: the op, its inputs and the vector-Jacobian product."""

    op: str
    parents: Tuple["Tensor", ...]
    backward_fn: BackwardFn


class Tensor:
    """Dense array taking part in reverse-mode differentiation."""

    def __init__(self, data, requires_grad: bool = False, dtype=None, name: Optional[str] = None):
        self.data = np.array(data, dtype=dtype or default_dtype())
        self.requires_grad = requires_grad
        self.grad: Optional[np.ndarray] = None
        self.node: Optional[TapeNode] = None
        self.name = name

    @classmethod
    def from_op(cls, data: np.ndarray, op: str, parents: Sequence["Tensor"], backward_fn: BackwardFn) -> "Tensor":
        out = cls.__new__(cls)
        out.data = data
        out.grad = None
        out.name = None
        out.requires_grad = any(p.requires_grad for p in parents)
        out.node = TapeNode(op, tuple(parents), backward_fn) if out.requires_grad else None
        return out

    @property
    def shape(self) -> Tuple[int, ...]:
        return self.data.shape

    @property
    def ndim(self) -> int:
        return self.data.ndim

    @property
    def size(self) -> int:
        return self.data.size

    def item(self) -> float:
        return float(self.data.reshape(-1)[0])

    def numpy(self) -> np.ndarray:
        return self.data

    def zero_grad(self) -> None:
        self.grad = None

    def backward(self) -> None:
        backward(self)

    def __add__(self, other):
        from .ops import add

        return add(self, other)

    def __matmul__(self, other):
        from .ops import matmul

        return matmul(self, other)

    def __mul__(self, factor: float):
        from .ops import scale

        return scale(self, factor)

    __rmul__ = __mul__

    def __repr__(self) -> str:
        label = f" name={self.name!r}" if self.name else ""
        return f"Tensor(shape={self.shape}{label}, requires_grad={self.requires_grad})"


def as_tensor(value) -> Tensor:
    return value if isinstance(value, Tensor) else Tensor(value)


def _topological_order(root: Tensor) -> List[Tensor]:
    order: List[Tensor] = []
    visited = set()
    stack = [(root, False)]
    while stack:
        tensor, expanded = stack.pop()
        if expanded:
            order.append(tensor)
            continue
        if id(tensor) in visited:
            continue
        visited.add(id(tensor))
        stack.append((tensor, True))
        if tensor.node is not None:
            for parent in tensor.node.parents:
                if parent.requires_grad and id(parent) not in visited:
                    stack.append((parent, False))
    return order


def backward(loss: Tensor) -> None:
    """
    Populate .grad on every leaf tensor with requires_grad that the loss depends on.

    Each node is visited once, after all its consumers, and gradients reaching a
    tensor along several paths are summed. Leaf gradients accumulate across calls.
    """
    if loss.size != 1:
        raise NotScalar(f"backward() needs a scalar loss, got shape {loss.shape}")
    if not loss.requires_grad:
        return
    grads = {id(loss): np.ones_like(loss.data)}
    for tensor in reversed(_topological_order(loss)):
        grad = grads.pop(id(tensor), None)
        if grad is None:
            continue
        if tensor.node is None:
            tensor.grad = grad.copy() if tensor.grad is None else tensor.grad + grad
            continue
        parent_grads = tensor.node.backward_fn(grad)
        for parent, parent_grad in zip(tensor.node.parents, parent_grads):
            if parent_grad is None or not parent.requires_grad:
                continue
            key = id(parent)
            grads[key] = parent_grad if key not in grads else grads[key] + parent_grad
