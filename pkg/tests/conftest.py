from pathlib import Path

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from fuzzyols.data import load_csv

DATA = Path(__file__).resolve().parents[1] / "data"

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(scope="session")
def auto():
    return load_csv(DATA / "auto_mpg.csv")


@pytest.fixture(scope="session")
def cpu():
    return load_csv(DATA / "cpu_performance.csv")


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
