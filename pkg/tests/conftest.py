import numpy as np
import pytest

from intermethods import ObjectiveSpec, quadratic


@pytest.fixture
def unit_quadratic_1d():
    """f(x) = x^2 / 2 in one dimension."""
    return quadratic([1.0], [0.0])


def translated(f, c):
    """``f`` shifted so that ``g(x) = f(x - c)``."""
    c = np.asarray(c, dtype=float)
    return ObjectiveSpec(n=f.n, value=lambda x: f.value(np.asarray(x) - c),
                         gradient=lambda x: f.gradient(np.asarray(x) - c),
                         L=f.L, mu=f.mu, x_star=f.x_star + c, f_star=f.f_star,
                         name=f.name + "-shifted")


ACCEPTANCE_LINES = []


def report_criterion(num, title, ok, detail):
    line = f"[criterion {num:2d}] {'PASS' if ok else 'FAIL'}  {title}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
