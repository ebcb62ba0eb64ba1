"""
Experiment configuration read from TOML files and command-line overrides.
"""
from enum import Enum
from pathlib import Path
from typing import Any, Dict, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, model_validator

from config import settings
from datagen.models import ORBIT_RHOS, Precision
from persformer.models import PersformerConfig
from persformer.serializers import load_document
from training.models import OptimSpec, Task


class ExperimentTask(str, Enum):
    ORBIT_CLASSIFY = "orbit_classify"
    MUTAG_CLASSIFY = "mutag_classify"
    CURVATURE_REGRESS = "curvature_regress"

    @property
    def training_task(self) -> Task:
        return Task.REGRESSION if self is ExperimentTask.CURVATURE_REGRESS else Task.CLASSIFICATION


class DatasetParams(BaseModel):
    """
    Where the diagrams come from: an existing dataset directory, a MUTAG
    directory, or generation parameters for the synthetic tasks.
    """

    model_config = ConfigDict(extra="forbid")

    path: Optional[Path] = None
    mutag_dir: Optional[Path] = Field(
        default_factory=lambda: Path(settings.mutag_dir) if settings.mutag_dir else None
    )
    per_class: int = Field(default=200, ge=1)
    n_points: int = Field(default=300, ge=1)
    rhos: Tuple[float, ...] = ORBIT_RHOS
    precision: Precision = Precision.FLOAT64
    n_clouds: int = Field(default=300, ge=2)
    curvature_range: Tuple[float, float] = (-2.0, 1.0)
    max_scale: Optional[float] = Field(default=None, gt=0)
    hks_time: Optional[float] = Field(default=None, gt=0)

    @model_validator(mode="after")
    def check_paths(self) -> "DatasetParams":
        for name in ("path", "mutag_dir"):
            value = getattr(self, name)
            if value is not None and not value.is_dir():
                raise ValueError(f"dataset.{name} does not exist: {value}")
        low, high = self.curvature_range
        if low >= high:
            raise ValueError(f"curvature_range must be increasing, got {self.curvature_range}")
        return self


class ExperimentConfig(BaseModel):
    """One training experiment. Model and optimizer default to the task's preset."""

    model_config = ConfigDict(extra="forbid")

    task: ExperimentTask = ExperimentTask.ORBIT_CLASSIFY
    dataset: DatasetParams = Field(default_factory=DatasetParams)
    model: Optional[PersformerConfig] = None
    optim: OptimSpec = Field(default_factory=OptimSpec)
    seed: Optional[int] = Field(default=None, ge=0)
    output_dir: Path = Field(default_factory=lambda: Path(settings.output_dir))

    @model_validator(mode="after")
    def check_task(self) -> "ExperimentConfig":
        if self.task is ExperimentTask.MUTAG_CLASSIFY and not (self.dataset.mutag_dir or self.dataset.path):
            raise ValueError("mutag_classify needs dataset.mutag_dir or dataset.path")
        return self

    def network(self, n_classes: Optional[int] = None) -> PersformerConfig:
        if self.model is not None:
            return self.model
        if self.task is ExperimentTask.MUTAG_CLASSIFY:
            return PersformerConfig.mutag_default()
        if self.task is ExperimentTask.CURVATURE_REGRESS:
            return PersformerConfig.curvature_default()
        return PersformerConfig.orbit_default(n_classes or len(self.dataset.rhos))

    def resolved_seed(self, override: Optional[int] = None) -> int:
        """Flag, then config file, then PERSFORMER_SEED, then 0."""
        for candidate in (override, self.seed, settings.seed):
            if candidate is not None:
                return int(candidate)
        return 0

    def echo(self) -> Dict[str, Any]:
        document = self.model_dump(mode="json")
        document["model"] = self.network().model_dump(mode="json")
        return document

    @classmethod
    def from_file(
        cls, path: Optional[Union[str, Path]] = None, overrides: Optional[Dict[str, Any]] = None
    ) -> "ExperimentConfig":
        """
        Load a TOML (or JSON) config and apply dotted-key overrides.

        Overrides with value None are ignored, so unset flags keep file values.
        """
        document: Dict[str, Any] = load_document(path) if path else {}
        for dotted, value in (overrides or {}).items():
            if value is None:
                continue
            target = document
            *parents, leaf = dotted.split(".")
            for key in parents:
                target = target.setdefault(key, {})
            target[leaf] = value
        return cls.model_validate(document)
