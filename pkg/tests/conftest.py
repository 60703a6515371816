import pytest

from steiner_sieve.catalog import catalog_builtin
from steiner_sieve.permgrp import PermGroup
from steiner_sieve.suzuki import build_inversive_plane, suzuki_generators


def pytest_addoption(parser):
    parser.addoption("--long", action="store_true", default=False,
                     help="run long sweeps (e = 5 plane, q up to 10^5)")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--long"):
        return
    skip = pytest.mark.skip(reason="long-running; use --long")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


@pytest.fixture(scope="session")
def catalog():
    return catalog_builtin()


@pytest.fixture(scope="session")
def sz8_gens():
    return suzuki_generators(3)


@pytest.fixture(scope="session")
def sz8(sz8_gens):
    return PermGroup(65, sz8_gens)


@pytest.fixture(scope="session")
def sz8_3():
    return PermGroup(65, suzuki_generators(3, with_field_automorphism=True))


@pytest.fixture(scope="session")
def plane8(sz8_gens):
    return build_inversive_plane(3, sz8_gens)


ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def acceptance_log():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
