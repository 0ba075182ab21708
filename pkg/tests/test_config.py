import json

import pytest

from quartic.config import (
    SEED_ENV,
    TOL_ENV,
    QuarticConfig,
    apply_env_overrides,
    load_config,
    save_config,
)


def test_defaults():
    config = QuarticConfig()
    assert config.seed == 42
    assert config.tol == 1e-9
    assert config.exact_tol == 1e-12
    assert config.samples == 1000
    assert not config.include_n4
    assert config.default_format == "json"
    assert config.workers == 1


def test_loose_tolerance_rejected():
    with pytest.raises(ValueError, match="too loose"):
        QuarticConfig(tol=0.5)
    with pytest.raises(ValueError):
        QuarticConfig(samples=0)


def test_missing_file_gives_defaults(config_path):
    assert not config_path.exists()
    assert load_config() == QuarticConfig()


def test_save_and_load(config_path):
    save_config(QuarticConfig(seed=7, samples=25, include_n4=True, default_format="csv"))
    assert json.loads(config_path.read_text())["seed"] == 7
    loaded = load_config()
    assert loaded.seed == 7
    assert loaded.samples == 25
    assert loaded.include_n4
    assert loaded.default_format == "csv"


def test_malformed_file(config_path):
    config_path.write_text("{oops")
    with pytest.raises(ValueError, match="malformed"):
        load_config()
    config_path.write_text(json.dumps({"tol": 1.0}))
    with pytest.raises(ValueError, match="Invalid configuration"):
        load_config()


def test_env_overrides(config_path, monkeypatch):
    base = QuarticConfig(seed=1)
    assert apply_env_overrides(base) is base
    monkeypatch.setenv(SEED_ENV, "99")
    monkeypatch.setenv(TOL_ENV, "1e-7")
    updated = apply_env_overrides(base)
    assert updated.seed == 99
    assert updated.tol == 1e-7
    monkeypatch.setenv(SEED_ENV, "not-a-number")
    with pytest.raises(ValueError, match="environment"):
        apply_env_overrides(base)
