import pytest


def pytest_addoption(parser):
    parser.addoption("--run-long", action="store_true", default=False, help="run checks that take hours")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--run-long"):
        return
    skip = pytest.mark.skip(reason="long run; pass --run-long")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)
