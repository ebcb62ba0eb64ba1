"""
Specifications for generated data and loaded graph collections.
"""
from dataclasses import dataclass
from enum import Enum
from typing import Tuple

from pydantic import BaseModel, ConfigDict, Field

from persistence.models import Graph

# Class index -> rho for the orbit classification task.
ORBIT_RHOS: Tuple[float, ...] = (2.5, 3.5, 4.0, 4.1, 4.3)


class Precision(str, Enum):
    FLOAT64 = "float64"
    ARBITRARY = "arbitrary"


class OrbitSpec(BaseModel):
    """One orbit of the linked twist map with parameter rho."""

    model_config = ConfigDict(frozen=True)

    rho: float = Field(gt=0)
    n_points: int = Field(default=1000, ge=1)
    seed: int = Field(default=0, ge=0, lt=2 ** 64)
    precision: Precision = Precision.FLOAT64


class CurvatureSampleSpec(BaseModel):
    """Uniform sample of the geodesic unit disc in a surface of constant curvature K."""

    model_config = ConfigDict(frozen=True)

    curvature: float
    n_points: int = Field(default=1000, ge=1)
    seed: int = Field(default=0, ge=0, lt=2 ** 64)


@dataclass(frozen=True)
class LabeledGraphSet:
    graphs: Tuple[Graph, ...]
    labels: Tuple[int, ...]

    def __post_init__(self):
        if len(self.graphs) != len(self.labels):
            raise ValueError(f"{len(self.graphs)} graphs but {len(self.labels)} labels")

    def __len__(self) -> int:
        return len(self.graphs)

    def node_counts(self) -> Tuple[int, ...]:
        return tuple(g.n_nodes for g in self.graphs)
