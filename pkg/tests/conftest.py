import cmath

import pytest

from icosacurves.generators import generator_catalog
from icosacurves.groups import closure
from icosacurves.verify import _aut_group


def approx(e):
    """Floating value of a field element at zeta_n = exp(2 pi i / n); an oracle independent of Phi_n."""
    n = e.conductor
    return sum(float(c) * cmath.exp(2j * cmath.pi * k / n) for k, c in enumerate(e.coords))


def approx_matrix(a):
    return [[approx(x) for x in row] for row in a.rows()]


@pytest.fixture(scope="session")
def aut_groups():
    return {d: _aut_group(d, 1) for d in (30, 20, 12)}


@pytest.fixture(scope="session")
def ico():
    return closure(generator_catalog("icosahedral_2x2"), "linear")


ACCEPTANCE_LINES: list = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
