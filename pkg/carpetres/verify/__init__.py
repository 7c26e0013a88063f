"""Named verification suites."""

from carpetres.verify.suites import SUITE_REGISTRY, get_suite, run_suite

__all__ = ["SUITE_REGISTRY", "get_suite", "run_suite"]
