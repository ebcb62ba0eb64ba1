"""
Model configuration and parameter state.
"""
from enum import Enum
from typing import Dict, Iterator, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from autodiff.tensor import Tensor


class Pooling(str, Enum):
    ATTENTION = "attention"
    ATTENTION_PLUS_SUM = "attention_plus_sum"


class Activation(str, Enum):
    GELU = "gelu"
    RELU = "relu"


class PersformerConfig(BaseModel):
    """
    Architecture of a Persformer.

    decoder_layers lists every decoder width including its input, which must
    equal the pooled width (hidden_dim, or 2 * hidden_dim when sum pooling is
    concatenated), and its output (class count, or 1 for regression).
    """

    model_config = ConfigDict(extra="forbid")

    input_dim: int = Field(default=4, ge=3)
    hidden_dim: int = Field(default=128, ge=1)
    n_layers: int = Field(default=5, ge=0)
    n_heads: int = Field(default=8, ge=1)
    ffn_hidden: Optional[int] = Field(default=None, ge=1)
    pooling: Pooling = Pooling.ATTENTION
    use_layer_norm: bool = True
    use_residual: bool = True
    decoder_layers: List[int] = Field(default_factory=lambda: [128, 256, 256, 64, 5])
    dropout_decoder: float = Field(default=0.2, ge=0.0, lt=1.0)
    activation: Activation = Activation.GELU

    @model_validator(mode="after")
    def check_shapes(self) -> "PersformerConfig":
        if self.hidden_dim % self.n_heads:
            raise ValueError(f"n_heads={self.n_heads} must divide hidden_dim={self.hidden_dim}")
        if len(self.decoder_layers) < 2 or min(self.decoder_layers) < 1:
            raise ValueError("decoder_layers needs an input and an output width, all positive")
        if self.decoder_layers[0] != self.pooled_dim:
            raise ValueError(
                f"decoder_layers[0]={self.decoder_layers[0]} must equal the pooled width {self.pooled_dim}"
            )
        return self

    @property
    def ffn_width(self) -> int:
        return self.ffn_hidden or 4 * self.hidden_dim

    @property
    def pooled_dim(self) -> int:
        factor = 2 if self.pooling is Pooling.ATTENTION_PLUS_SUM else 1
        return factor * self.hidden_dim

    @property
    def n_outputs(self) -> int:
        return self.decoder_layers[-1]

    @classmethod
    def orbit_default(cls, n_classes: int = 5) -> "PersformerConfig":
        return cls(
            input_dim=4,
            hidden_dim=128,
            n_layers=5,
            n_heads=8,
            decoder_layers=[128, 256, 256, 64, n_classes],
            dropout_decoder=0.2,
        )

    @classmethod
    def curvature_default(cls) -> "PersformerConfig":
        """Single-output regressor for the curvature discs."""
        return cls(
            input_dim=4,
            hidden_dim=64,
            n_layers=3,
            n_heads=4,
            decoder_layers=[64, 64, 1],
            dropout_decoder=0.0,
        )

    @classmethod
    def mutag_default(cls) -> "PersformerConfig":
        return cls(
            input_dim=6,
            hidden_dim=32,
            n_layers=2,
            n_heads=4,
            pooling=Pooling.ATTENTION_PLUS_SUM,
            decoder_layers=[64, 32, 2],
            dropout_decoder=0.2,
        )


class ModelState:
    """Named trainable parameters, in creation order."""

    def __init__(self, parameters: Dict[str, Tensor]):
        self.parameters = dict(parameters)

    def __getitem__(self, name: str) -> Tensor:
        return self.parameters[name]

    def __contains__(self, name: str) -> bool:
        return name in self.parameters

    def __iter__(self) -> Iterator[str]:
        return iter(self.parameters)

    def __len__(self) -> int:
        return len(self.parameters)

    def items(self) -> Iterator[Tuple[str, Tensor]]:
        return iter(self.parameters.items())

    def zero_grad(self) -> None:
        for tensor in self.parameters.values():
            tensor.zero_grad()

    def arrays(self) -> Dict[str, np.ndarray]:
        return {name: tensor.data.copy() for name, tensor in self.parameters.items()}

    def copy(self) -> "ModelState":
        return ModelState.from_arrays(self.arrays())

    @classmethod
    def from_arrays(cls, arrays: Dict[str, np.ndarray]) -> "ModelState":
        return cls({name: Tensor(value, requires_grad=True, name=name) for name, value in arrays.items()})

    def n_values(self) -> int:
        return sum(t.size for t in self.parameters.values())

    def is_finite(self) -> bool:
        return all(np.all(np.isfinite(t.data)) for t in self.parameters.values())
