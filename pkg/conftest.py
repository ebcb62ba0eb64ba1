"""
Pytest configuration and shared fixtures for toolkit tests.
"""
import logging

import numpy as np
import pytest

from diagrams.models import DiagramDataset
from persformer.models import PersformerConfig, Pooling
from utils.factories import separable_dataset

# Configure logging
logging.basicConfig(
    level=logging.INFO,
    format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
)
logger = logging.getLogger(__name__)


@pytest.fixture
def rng() -> np.random.Generator:
    """Fresh seeded generator per test."""
    return np.random.default_rng(20240611)


@pytest.fixture
def small_config() -> PersformerConfig:
    """Two-layer classifier small enough for finite-difference checks."""
    return PersformerConfig(
        input_dim=4,
        hidden_dim=8,
        n_layers=2,
        n_heads=2,
        decoder_layers=[8, 6, 3],
        dropout_decoder=0.0,
    )


@pytest.fixture
def small_sum_config() -> PersformerConfig:
    """One-layer model with sum pooling appended, on extended-type features."""
    return PersformerConfig(
        input_dim=6,
        hidden_dim=8,
        n_layers=1,
        n_heads=2,
        pooling=Pooling.ATTENTION_PLUS_SUM,
        decoder_layers=[16, 4, 2],
        dropout_decoder=0.0,
    )


@pytest.fixture
def toy_dataset(rng) -> DiagramDataset:
    """40 diagrams in two lifetime-separable classes, 30 train / 10 test."""
    return separable_dataset(rng)


@pytest.fixture(autouse=True)
def setup_test_environment():
    """Setup and teardown for each test."""
    logger.debug("Setting up test environment")
    yield
    logger.debug("Tearing down test environment")
