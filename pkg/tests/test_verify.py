"""
Tests for the verification suites.

Run with: pytest tests/test_verify.py -v
"""

import pytest

from carpetres.models import RunConfig
from carpetres.verify import SUITE_REGISTRY, get_suite, run_suite


@pytest.fixture
def quick_config(tmp_path):
    return RunConfig(N=2, m_max=2, n_max=1, k_max=2, cache_dir=tmp_path / "cache")


def assert_all_passed(records):
    failed = [rec.label() for rec in records if not rec.passed]
    assert records and not failed, failed


class TestRegistry:
    """Tests for suite lookup."""

    def test_names(self):
        assert set(SUITE_REGISTRY) == {"duality", "thomson", "symmetry", "sector", "beta", "sandwich"}
        assert all(entry["description"] for entry in SUITE_REGISTRY.values())

    def test_lookup_is_case_insensitive(self):
        assert get_suite("Beta") is SUITE_REGISTRY["beta"]["function"]

    def test_unknown(self):
        with pytest.raises(ValueError, match="Unknown suite"):
            get_suite("nothing")


class TestSuites:
    """Each suite passes on small octacarpet and hexacarpet runs."""

    @pytest.mark.parametrize("name", ["duality", "thomson", "symmetry"])
    def test_graph_suites(self, quick_config, name):
        records = run_suite(name, quick_config, quick_config.result_cache())
        assert_all_passed(records)
        assert {rec.suite for rec in records} == {name}

    def test_graph_suites_n3(self, quick_config):
        config = quick_config.overlay(N=3)
        for name in ("duality", "symmetry"):
            assert_all_passed(run_suite(name, config))

    def test_sector(self, quick_config):
        records = run_suite("sector", quick_config)
        assert len(records) == 8
        assert_all_passed(records)

    @pytest.mark.parametrize("N", [2, 3, 7])
    def test_beta(self, quick_config, N):
        assert_all_passed(run_suite("beta", quick_config.overlay(N=N)))

    def test_sandwich(self, quick_config):
        records = run_suite("sandwich", quick_config, quick_config.result_cache())
        names = {rec.check.split(" ")[0] for rec in records}
        assert {"lower", "upper", "glued-upper", "glued-lower"} <= names
        assert_all_passed(records)
