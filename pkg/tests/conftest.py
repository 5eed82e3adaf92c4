"""pytest configuration: slow tests only run with --runslow."""

import typing as t

import pytest


def pytest_addoption(parser: t.Any) -> None:
    """Add --runslow option."""
    parser.addoption("--runslow", action="store_true", default=False,
                     help="run slow parameter recovery tests")


def pytest_configure(config: t.Any) -> None:
    """Register slow marker."""
    config.addinivalue_line("markers", "slow: slow acceptance test")


def pytest_collection_modifyitems(config: t.Any,
                                  items: t.List[t.Any],
                                  ) -> None:
    """Skip slow tests unless --runslow is given."""
    if config.getoption("--runslow"):
        return
    skip = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)
