"""
Tests for the environment-driven configuration and the result cache.

Run with: pytest tests/test_config.py -v
"""

from pathlib import Path

import pytest

from carpetres.config import Config, get_config
from carpetres.models import RunConfig
from carpetres.utils.cache import ResultCache
from carpetres.utils.numfmt import fmt17


@pytest.fixture
def fresh_config(monkeypatch):
    """Yield a function that rebuilds the singleton after environment changes."""
    yield Config.reset
    monkeypatch.undo()
    Config.reset()


class TestConfig:
    """Tests for Config."""

    def test_singleton(self):
        assert get_config() is get_config()

    def test_environment_overrides(self, monkeypatch, fresh_config):
        monkeypatch.setenv("CARPETRES_SOLVER_RTOL", "1e-10")
        monkeypatch.setenv("CARPETRES_M_MAX", "6")
        monkeypatch.setenv("CARPETRES_CACHE", "false")
        config = fresh_config()
        assert config.solver.rtol == 1e-10
        assert config.scaling.m_max == 6
        assert not config.paths.cache_enabled

        run = RunConfig.from_config(config)
        assert run.solver_rtol == 1e-10 and run.m_max == 6 and not run.cache_enabled

    def test_validate(self, monkeypatch, fresh_config):
        monkeypatch.setenv("CARPETRES_SLACK", "2.0")
        monkeypatch.setenv("CARPETRES_WORKERS", "0")
        config = fresh_config()
        errors = config.validate()
        assert len(errors) == 2
        assert not config.is_valid()

    def test_defaults_valid(self, monkeypatch, fresh_config):
        for name in ("SNAP_TOLERANCE", "SOLVER_RTOL", "SLACK", "WORKERS", "M_MAX"):
            monkeypatch.delenv(f"CARPETRES_{name}", raising=False)
        assert fresh_config().is_valid()


class TestResultCache:
    """Tests for the content-addressed cache."""

    def test_key_is_order_independent(self):
        assert ResultCache.key(a=1, b=0.1) == ResultCache.key(b=0.1, a=1)
        assert ResultCache.key(a=1) != ResultCache.key(a=2)

    def test_put_and_get(self, tmp_path):
        cache = ResultCache(tmp_path)
        key = ResultCache.key(what="test")
        path = cache.put(key, {"R": 0.1 + 0.2})
        assert path == cache.path_for(key) and path.exists()
        assert cache.get(key) == {"R": 0.1 + 0.2}

    def test_corrupt_entry_discarded(self, tmp_path):
        cache = ResultCache(tmp_path)
        key = ResultCache.key(what="corrupt")
        path = cache.path_for(key)
        path.parent.mkdir(parents=True)
        path.write_text("{not json")
        assert cache.get(key) is None
        assert not path.exists()

    def test_disabled(self, tmp_path):
        cache = ResultCache(tmp_path, enabled=False)
        assert cache.put("abc", {"x": 1}) is None
        assert cache.get("abc") is None
        assert list(Path(tmp_path).iterdir()) == []


class TestNumberFormat:
    """Tests for fmt17."""

    def test_round_trip(self):
        value = 0.1 + 0.2
        assert float(fmt17(value)) == value

    def test_special_values(self):
        assert fmt17(float("inf")) == "inf"
        assert fmt17(-float("inf")) == "-inf"
        assert fmt17(3) == "3"
