"""Seeded property suites behind `verify-paper`."""

from .suites import SUITES, SuiteOptions, SuiteResult, run_suite, run_suites

__all__ = ["SUITES", "SuiteOptions", "SuiteResult", "run_suite", "run_suites"]
