"""
Optimization, training loops, metrics and cross-validation.
"""
from .models import AdamState, CrossValidationResult, OptimSpec, RunMetrics, Task, TrainResult
from .optim import adamw_step, clip_by_global_norm, lr_schedule
from .services import (
    TrainingService,
    featurize_dataset,
    featurize_diagrams,
    k_fold_cv,
    train_classifier,
    train_regressor,
)

__all__ = [
    "AdamState",
    "CrossValidationResult",
    "OptimSpec",
    "RunMetrics",
    "Task",
    "TrainResult",
    "TrainingService",
    "adamw_step",
    "clip_by_global_norm",
    "featurize_dataset",
    "featurize_diagrams",
    "k_fold_cv",
    "lr_schedule",
    "train_classifier",
    "train_regressor",
]
