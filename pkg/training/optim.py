"""
AdamW with decoupled weight decay, global-norm clipping and the learning-rate
schedule (linear warmup, then cosine decay with hard restarts).
"""
import math
from typing import Dict, Mapping, Tuple

import numpy as np

from .exceptions import NonFiniteGradient
from .models import AdamState, OptimSpec


def adamw_step(
    params: Mapping[str, np.ndarray],
    grads: Mapping[str, np.ndarray],
    state: AdamState,
    lr: float,
    spec: OptimSpec,
) -> Tuple[Dict[str, np.ndarray], AdamState]:
    """
    One AdamW update. The decay p <- p - lr * weight_decay * p is applied first,
    then the bias-corrected adaptive step.

    Raises:
        NonFiniteGradient: before anything is changed, if any gradient is NaN or inf
    """
    for name, grad in grads.items():
        if not np.all(np.isfinite(grad)):
            raise NonFiniteGradient(f"Gradient of {name} is not finite at step {state.step + 1}")
    beta1, beta2 = spec.betas
    step = state.step + 1
    correction1 = 1.0 - beta1 ** step
    correction2 = 1.0 - beta2 ** step
    new_params, new_m, new_v = {}, {}, {}
    for name, value in params.items():
        grad = grads[name]
        m = beta1 * state.m.get(name, np.zeros_like(value)) + (1.0 - beta1) * grad
        v = beta2 * state.v.get(name, np.zeros_like(value)) + (1.0 - beta2) * grad * grad
        decayed = value - lr * spec.weight_decay * value
        new_params[name] = decayed - lr * (m / correction1) / (np.sqrt(v / correction2) + spec.eps)
        new_m[name], new_v[name] = m, v
    return new_params, AdamState(step=step, m=new_m, v=new_v)


def global_norm(grads: Mapping[str, np.ndarray]) -> float:
    return math.sqrt(math.fsum(float(np.sum(g * g)) for g in grads.values()))


def clip_by_global_norm(grads: Mapping[str, np.ndarray], max_norm: float) -> Dict[str, np.ndarray]:
    norm = global_norm(grads)
    if norm <= max_norm or norm == 0.0:
        return dict(grads)
    factor = max_norm / norm
    return {name: g * factor for name, g in grads.items()}


def lr_schedule(step: int, steps_per_epoch: int, spec: OptimSpec) -> float:
    """
    Learning rate at an optimizer step.

    Warmup rises linearly from 0 to max_lr over warmup_epochs; the remaining
    steps are split into `cycles` equal segments, each decaying from max_lr to 0
    along a half cosine. Zero after total_epochs.
    """
    warmup = spec.warmup_epochs * steps_per_epoch
    total = spec.total_epochs * steps_per_epoch
    if step < warmup:
        return spec.max_lr * step / warmup
    if step >= total:
        return 0.0
    decay = total - warmup
    position = ((step - warmup) * spec.cycles % decay) / decay
    return spec.max_lr * 0.5 * (1.0 + math.cos(math.pi * position))
