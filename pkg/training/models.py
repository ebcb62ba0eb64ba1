"""
Optimizer settings, optimizer state and run records.
"""
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from persformer.network import Persformer


class Task(str, Enum):
    CLASSIFICATION = "classification"
    REGRESSION = "regression"


class OptimSpec(BaseModel):
    """AdamW with linear warmup and cosine decay with hard restarts."""

    model_config = ConfigDict(extra="forbid")

    max_lr: float = Field(default=1e-3, gt=0)
    weight_decay: float = Field(default=1e-4, ge=0)
    betas: Tuple[float, float] = (0.9, 0.999)
    eps: float = Field(default=1e-8, gt=0)
    batch_size: int = Field(default=32, ge=1)
    warmup_epochs: int = Field(default=10, ge=0)
    cycles: int = Field(default=3, ge=1)
    total_epochs: int = Field(default=1000, ge=1)
    clip_norm: Optional[float] = Field(default=1.0, gt=0)

    @model_validator(mode="after")
    def check_epochs(self) -> "OptimSpec":
        if self.warmup_epochs > self.total_epochs:
            raise ValueError(
                f"warmup_epochs={self.warmup_epochs} exceeds total_epochs={self.total_epochs}"
            )
        if not all(0.0 <= b < 1.0 for b in self.betas):
            raise ValueError(f"betas must lie in [0, 1), got {self.betas}")
        return self


@dataclass
class AdamState:
    """First and second moment estimates per parameter, and the step count."""

    step: int = 0
    m: Dict[str, np.ndarray] = field(default_factory=dict)
    v: Dict[str, np.ndarray] = field(default_factory=dict)


@dataclass
class RunMetrics:
    """Per-epoch trace of one training run; wall_clock is excluded from equality."""

    seed: int
    train_loss: List[float] = field(default_factory=list)
    test_loss: List[float] = field(default_factory=list)
    metric: List[float] = field(default_factory=list)
    lr: List[float] = field(default_factory=list)
    best_epoch: int = -1
    wall_clock: float = field(default=0.0, compare=False)

    @property
    def n_epochs(self) -> int:
        return len(self.train_loss)

    @property
    def best_metric(self) -> float:
        return self.metric[self.best_epoch] if self.best_epoch >= 0 else float("nan")


@dataclass
class TrainResult:
    model: Persformer
    metrics: RunMetrics
    task: Task


@dataclass(frozen=True)
class CrossValidationResult:
    fold_scores: Tuple[float, ...]
    mean: float
    std: float
