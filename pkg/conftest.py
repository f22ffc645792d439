"""
Shared pytest setup.

Tests marked longrun reproduce the headline tables and bounds (c_60, b_60,
polygons up to length 44, ...). They take hours to days and only run with
TAXI_LONG_RUN=1 in the environment.
"""
import os

import pytest

LONG_RUN_ENV = "TAXI_LONG_RUN"


def pytest_configure(config):
    config.addinivalue_line("markers", "longrun: full-scale computation, enabled by TAXI_LONG_RUN=1")


def pytest_collection_modifyitems(config, items):
    if os.getenv(LONG_RUN_ENV) == "1":
        return
    skip = pytest.mark.skip(reason=f"long run; set {LONG_RUN_ENV}=1 to enable")
    for item in items:
        if "longrun" in item.keywords:
            item.add_marker(skip)
