import math

import pytest

from gsteffensen.problems import Problem


def fraction_gsteffensen(x, f, g):
    """Exact rational g-Steffensen update; only valid for polynomial f and g."""
    s = g(f(x))
    return x - s * f(x) / (f(x + s) - f(x))


@pytest.fixture
def quadratic():
    """f(x) = x^2 - 1 from x0 = 1.5 with root 1."""
    return Problem(
        "Q",
        "x^2 - 1",
        lambda x: x * x - 1,
        lambda x: 2 * x,
        lambda x: 2.0,
        (0.0, 2.0),
        1.5,
        reference_roots=(1.0,),
    )


@pytest.fixture
def linear():
    return Problem(
        "L", "x", lambda x: x, lambda x: 1.0, lambda x: 0.0, (-1.0, 1.0), 0.5, reference_roots=(0.0,)
    )


def ulp_distance(a: float, b: float, scale: float) -> float:
    return abs(a - b) / math.ulp(scale) if scale else abs(a - b)


ACCEPTANCE: dict[str, tuple[bool, str]] = {}


def record(criterion: str, ok: bool, detail: str) -> None:
    ACCEPTANCE[criterion] = (ok, detail)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(ACCEPTANCE, key=lambda k: int(k.split()[0])):
        ok, detail = ACCEPTANCE[name]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
