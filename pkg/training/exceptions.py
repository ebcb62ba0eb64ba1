"""
Errors raised while training and evaluating models.
"""


class TrainingError(ValueError):
    """Base class for invalid training input."""


class TooFewItems(TrainingError):
    """The dataset is too small for the requested split or fold count."""


class InvalidLabels(TrainingError):
    """Labels are missing or do not fit the task."""


class NonFiniteGradient(RuntimeError):
    """A gradient contains NaN or infinity; the step was not applied."""


class TrainingDiverged(RuntimeError):
    """The loss or the parameters became non-finite."""

    def __init__(self, epoch: int, step: int, lr: float, loss: float):
        self.epoch = epoch
        self.step = step
        self.lr = lr
        self.loss = loss
        super().__init__(f"Training diverged at epoch {epoch}, step {step} (loss={loss}, lr={lr:.3e})")
