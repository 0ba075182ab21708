"""Shared fixtures for the quartic test suite."""

from pathlib import Path

import numpy as np
import pytest

from quartic import config as config_module
from quartic.core.states import TheoryOrder


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240601)


@pytest.fixture
def exbit() -> TheoryOrder:
    """The N = 2, m = 1 theory."""
    return TheoryOrder(n=2, m=1)


@pytest.fixture
def config_path(tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> Path:
    """Point the CLI configuration at a temporary file and clear env overrides."""
    path = tmp_path / "config.json"
    monkeypatch.setattr(config_module, "get_config_path", lambda: path)
    monkeypatch.delenv(config_module.SEED_ENV, raising=False)
    monkeypatch.delenv(config_module.TOL_ENV, raising=False)
    return path
