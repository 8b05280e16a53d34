"""Shared pytest configuration.

Long acceptance sweeps are marked ``slow`` and skipped unless pytest runs
with --run-slow.
"""

from __future__ import annotations

import pytest


def pytest_addoption(parser):
    parser.addoption(
        "--run-slow",
        action="store_true",
        default=False,
        help="Run the long acceptance sweeps",
    )


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: marks long acceptance sweeps (need --run-slow)")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--run-slow"):
        return
    skip_slow = pytest.mark.skip(reason="Need --run-slow to run")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)
