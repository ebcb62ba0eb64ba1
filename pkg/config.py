"""
Configuration management for the persformer toolkit.
"""
from typing import Literal, Optional

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Toolkit settings loaded from environment variables (prefix ``PERSFORMER_``)."""

    model_config = SettingsConfigDict(
        env_prefix="PERSFORMER_",
        env_file=".env",
        case_sensitive=False,
        extra="ignore",
    )

    # Reproducibility
    seed: Optional[int] = Field(default=None, description="Seed fallback for every command")

    # Logging
    log_level: str = Field(default="INFO")
    log_json: bool = Field(default=True)

    # Execution
    jobs: int = Field(default=1, ge=1)
    output_dir: str = Field(default="runs")
    default_dtype: Literal["float64", "float32"] = Field(default="float64")

    # Persistence computation
    hks_time: float = Field(default=10.0, gt=0)
    rips_max_scale: float = Field(default=0.5, gt=0)
    rips_max_points: int = Field(default=400, ge=1)

    # Orbit precision study
    divergence_max_steps: int = Field(default=2000, ge=1)

    # Datasets
    mutag_dir: Optional[str] = Field(default=None, description="Directory holding the MUTAG text files")


# Global settings instance
settings = Settings()
