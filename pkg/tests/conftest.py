import sys

import pytest

from toricq.cohomology import build_ring
from toricq.fan import builtin_names, load_fan
from toricq.picard import weight_matrix

SHIPPED = builtin_names()


@pytest.fixture(scope="session")
def fans():
    return {name: load_fan(name) for name in SHIPPED}


@pytest.fixture(scope="session")
def rings(fans):
    out = {}
    for name, f in fans.items():
        A = weight_matrix(f)
        out[name] = (f, A, build_ring(f, A))
    return out


@pytest.fixture(scope="session")
def f2():
    f = load_fan("f2")
    A = weight_matrix(f)
    return f, A, build_ring(f, A)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is not None and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in mod.RESULTS:
            terminalreporter.write_line(line)
