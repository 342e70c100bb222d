"""The nine benchmark equations with derivatives, start points and expected outcomes."""

from __future__ import annotations

import enum
import functools
import math
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

from .analysis import bisection_oracle
from .solver import OutcomeClass

ScalarFn = Callable[[float], float]

SCAN_SUBINTERVALS = 512
SCAN_MARGIN = 5.0
ORACLE_TOL = 1e-14
DEDUP_TOL = 1e-10


class Expected(str, enum.Enum):
    """Outcome asserted by the published examples for one cell."""

    IN_INTERVAL = "converges in interval"
    OUTSIDE_INTERVAL = "converges outside interval"
    NONCONVERGENT = "does not converge"
    NOT_IN_INTERVAL = "does not converge in interval"

    def accepts(self, outcome: OutcomeClass) -> bool:
        if self is Expected.IN_INTERVAL:
            return outcome is OutcomeClass.CONVERGED_IN_INTERVAL
        if self is Expected.OUTSIDE_INTERVAL:
            return outcome is OutcomeClass.CONVERGED_OUTSIDE_INTERVAL
        if self is Expected.NONCONVERGENT:
            return not outcome.converged
        return outcome is not OutcomeClass.CONVERGED_IN_INTERVAL

    @property
    def converges(self) -> bool:
        return self in (Expected.IN_INTERVAL, Expected.OUTSIDE_INTERVAL)


@dataclass(frozen=True)
class TableRow:
    """One published row: iteration count, final iterate and residual."""

    n: int
    x: float
    abs_f: float


@dataclass(frozen=True)
class Expectation:
    outcome: Expected
    citation: str
    table: Optional[TableRow] = None


@dataclass(frozen=True)
class Problem:
    id: str
    display: str
    f: ScalarFn
    df: Optional[ScalarFn]
    d2f: Optional[ScalarFn]
    interval: tuple[float, float]
    x0: float
    expected: dict[str, Expectation] = field(default_factory=dict)
    reference_roots: tuple[float, ...] = ()
    closed_form_roots: Optional[Callable[[float, float], list[float]]] = None
    aliases: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        a, b = self.interval
        if not a < b:
            raise ValueError(f"{self.id}: empty interval {self.interval}")
        if not a <= self.x0 <= b:
            raise ValueError(f"{self.id}: x0 = {self.x0} outside {self.interval}")

    @property
    def primary_root(self) -> float:
        """The reference root inside the interval, else the one nearest to it."""
        if not self.reference_roots:
            raise ValueError(f"{self.id}: reference roots not resolved")
        a, b = self.interval
        inside = [r for r in self.reference_roots if a <= r <= b]
        if inside:
            return inside[0]
        return min(self.reference_roots, key=lambda r: min(abs(r - a), abs(r - b)))

    def expectation(self, method_id: str, g_id: Optional[str]) -> Optional[Expectation]:
        """Expectation for a cell. Identity-g runs share the Steffensen entry."""
        if method_id == "gsteffensen":
            key = "steffensen" if g_id == "identity" else g_id
        else:
            key = method_id
        return self.expected.get(key)


def derivative_check(problem: Problem, points: int = 20) -> float:
    """Largest relative disagreement between the analytic and finite-difference derivatives.

    First derivatives use a central difference with h = 1e-6, second
    derivatives a central second difference with h = 1e-4, at ``points``
    evenly spaced points of the interval. Errors are scaled by
    ``max(1, |analytic|)``.
    """
    a, b = problem.interval
    f = problem.f
    worst = 0.0
    for k in range(points):
        x = a + (b - a) * k / (points - 1)
        if problem.df is not None:
            h = 1e-6
            fd = (f(x + h) - f(x - h)) / (2 * h)
            worst = max(worst, abs(fd - problem.df(x)) / max(1.0, abs(problem.df(x))))
        if problem.d2f is not None:
            h = 1e-4
            fd2 = (f(x + h) - 2 * f(x) + f(x - h)) / (h * h)
            worst = max(worst, abs(fd2 - problem.d2f(x)) / max(1.0, abs(problem.d2f(x))))
    return worst


def resolve_reference_roots(problem: Problem) -> Problem:
    """Fill ``reference_roots`` by scanning ``[a-5, b+5]`` and bisecting each sign change.

    Closed-form roots, where the problem declares them, replace the oracle
    values. A problem whose scan window holds no root is returned unchanged
    with an empty tuple.
    """
    a, b = problem.interval
    lo, hi = a - SCAN_MARGIN, b + SCAN_MARGIN
    if problem.closed_form_roots is not None:
        return replace(problem, reference_roots=tuple(sorted(problem.closed_form_roots(lo, hi))))

    f = problem.f
    width = (hi - lo) / SCAN_SUBINTERVALS
    grid = [lo + k * width for k in range(SCAN_SUBINTERVALS)] + [hi]
    vals = [f(x) for x in grid]
    found: list[float] = []
    for k in range(SCAN_SUBINTERVALS):
        x1, x2, f1, f2 = grid[k], grid[k + 1], vals[k], vals[k + 1]
        if f1 == 0.0:
            found.append(x1)
        elif f1 * f2 < 0:
            found.append(bisection_oracle(f, x1, x2, ORACLE_TOL))
    if vals[-1] == 0.0:
        found.append(grid[-1])

    roots: list[float] = []
    for r in sorted(found):
        if not roots or abs(r - roots[-1]) > DEDUP_TOL:
            roots.append(r)
    return replace(problem, reference_roots=tuple(roots))


# -- catalog ------------------------------------------------------------------

_IN = Expected.IN_INTERVAL
_OUT = Expected.OUTSIDE_INTERVAL
_NO = Expected.NONCONVERGENT
_NOT_IN = Expected.NOT_IN_INTERVAL

_STEFF_FAILS_1_3 = "Examples 1-3: not convergent with Steffensen's method"
_BOTH_FAIL_4_6 = "Examples 4-6: neither Newton's nor Steffensen's method converges"


def _exp(spec: dict[str, tuple[Expected, str, Optional[TableRow]]]) -> dict[str, Expectation]:
    return {k: Expectation(o, c, t) for k, (o, c, t) in spec.items()}


def _odd_half_pi(lo: float, hi: float) -> list[float]:
    k0 = math.ceil((lo - math.pi / 2) / math.pi)
    k1 = math.floor((hi - math.pi / 2) / math.pi)
    return [math.pi / 2 + k * math.pi for k in range(k0, k1 + 1)]


def _p1() -> Problem:
    c = "Example 1: convergent for all g"
    return Problem(
        "P1",
        "sin(x)^2 - x^2 + 1",
        lambda x: math.sin(x) ** 2 - x**2 + 1,
        lambda x: math.sin(2 * x) - 2 * x,
        lambda x: 2 * math.cos(2 * x) - 2,
        (0.0, 3.0),
        3.0,
        _exp({
            "g1": (_IN, c, TableRow(7, 1.4044916482153411, 3.3306690738754696e-16)),
            "g2": (_IN, c, TableRow(7, 1.4044916482153411, 3.3306690738754696e-16)),
            "g3": (_IN, c, TableRow(12, 1.4044916482773504, 1.5393597507795675e-10)),
            "g4": (_IN, c, TableRow(4, 1.4044916488265187, 1.5172312295419488e-9)),
            "g5": (_IN, c, TableRow(11, 1.4044916482153413, 4.440892098500626e-16)),
            "g6": (_IN, c, TableRow(80, 1.4044916482153411, 3.3306690738754696e-16)),
            "steffensen": (_NO, _STEFF_FAILS_1_3, None),
        }),
        aliases=("sin^2(x)-x^2+1", "sen^2(x)-x^2+1"),
    )


def _p2() -> Problem:
    c = "Example 2: not convergent just for g2"
    return Problem(
        "P2",
        "x^3 - x - 1",
        lambda x: x**3 - x - 1,
        lambda x: 3 * x**2 - 1,
        lambda x: 6 * x,
        (0.0, 2.0),
        1.0,
        _exp({
            "g1": (_IN, c, TableRow(11, 1.324717957244746, 2.220446049250313e-16)),
            "g2": (_NO, c, None),
            "g3": (_IN, c, TableRow(5, 1.3247179573200405, 3.211033661187912e-10)),
            "g4": (_IN, c, TableRow(5, 1.3247179573118653, 2.862388104318825e-10)),
            "g5": (_IN, c, TableRow(28, 1.324717957244746, 2.220446049250313e-16)),
            "g6": (_IN, c, TableRow(8, 1.324717957244746, 2.220446049250313e-16)),
            "steffensen": (_NO, _STEFF_FAILS_1_3, None),
        }),
        aliases=("x^3-x-1",),
    )


def _p3() -> Problem:
    c = "Example 3: convergent for g1, g4, g5, g6; divergent for g2, g3"
    return Problem(
        "P3",
        "exp(1 - x) - 1",
        lambda x: math.exp(1 - x) - 1,
        lambda x: -math.exp(1 - x),
        lambda x: math.exp(1 - x),
        (0.0, 3.0),
        3.0,
        _exp({
            "g1": (_IN, c, TableRow(5, 1.0, 0.0)),
            "g2": (_NO, c, None),
            "g3": (_NO, c, None),
            "g4": (_IN, c, TableRow(11, 0.9999999999188026, 8.119727112898545e-11)),
            "g5": (_IN, c, TableRow(6, 1.0, 0.0)),
            "g6": (_IN, c, TableRow(24, 0.9999999999999999, 0.0)),
            "steffensen": (_NO, _STEFF_FAILS_1_3, None),
        }),
        closed_form_roots=lambda lo, hi: [1.0],
        aliases=("exp(1-x)-1", "e^(1-x)-1"),
    )


def _p4() -> Problem:
    c = "Example 4: convergent for g1, g3, g4; divergent for g2, g5, g6"
    return Problem(
        "P4",
        "x^3 - 2x + 2",
        lambda x: x**3 - 2 * x + 2,
        lambda x: 3 * x**2 - 2,
        lambda x: 6 * x,
        (-3.0, 1.0),
        1.0,
        _exp({
            "g1": (_IN, c, TableRow(12, -1.7692923542386314, 0.0)),
            "g2": (_NO, c, None),
            "g3": (_IN, c, TableRow(28, -1.7692923543026569, 4.73223682462276e-10)),
            "g4": (_IN, c, TableRow(27, -1.76929235421728, 1.5781242979073795e-10)),
            "g5": (_NO, c, None),
            "g6": (_NO, c, None),
            "newton": (_NO, _BOTH_FAIL_4_6, None),
            "steffensen": (_NO, _BOTH_FAIL_4_6, None),
        }),
        aliases=("x^3-2x+2",),
    )


def _p5() -> Problem:
    c = "Example 5: convergent for g4, g6; divergent for g1, g2, g3, g5"
    return Problem(
        "P5",
        "arctan(x - 2)",
        lambda x: math.atan(x - 2),
        lambda x: 1 / (1 + (x - 2) ** 2),
        lambda x: -2 * (x - 2) / (1 + (x - 2) ** 2) ** 2,
        (0.0, 3.5),
        3.5,
        _exp({
            "g1": (_NO, c, None),
            "g2": (_NO, c, None),
            "g3": (_NO, c, None),
            "g4": (_IN, c, TableRow(6, 2.000000000000001, 8.881784197001252e-16)),
            "g5": (_NO, c, None),
            "g6": (_IN, c, TableRow(4, 2.0, 0.0)),
            "newton": (_NO, _BOTH_FAIL_4_6, None),
            "steffensen": (_NO, _BOTH_FAIL_4_6, None),
        }),
        closed_form_roots=lambda lo, hi: [2.0],
        aliases=("arctan(x-2)", "arctg(x-2)"),
    )


def _p6() -> Problem:
    # the tabulated limit -1.1673... lies outside [0, 3]
    c = "Example 6: convergent for g1, g4, g6; divergent for g2, g3, g5"
    return Problem(
        "P6",
        "x^5 - x + 1",
        lambda x: x**5 - x + 1,
        lambda x: 5 * x**4 - 1,
        lambda x: 20 * x**3,
        (0.0, 3.0),
        3.0,
        _exp({
            "g1": (_OUT, c, TableRow(30, -1.1673039782614187, 6.661338147750939e-16)),
            "g2": (_NO, c, None),
            "g3": (_NO, c, None),
            "g4": (_OUT, c, TableRow(8, -1.1673039788241997, 4.6617254501057914e-9)),
            "g5": (_NO, c, None),
            "g6": (_OUT, c, TableRow(22, -1.1673039782614187, 6.661338147750939e-16)),
            "newton": (_NO, _BOTH_FAIL_4_6, None),
            "steffensen": (_NO, _BOTH_FAIL_4_6, None),
        }),
        aliases=("x^5-x+1",),
    )


def _p7() -> Problem:
    c = (
        "Example 7: Newton divergent; Steffensen convergent outside [0,3]; "
        "g2, g4 converge in [0,3]; g1, g3 converge outside; g5, g6 divergent"
    )
    return Problem(
        "P7",
        "0.5x^3 - 6x^2 + 21.5x - 22",
        lambda x: 0.5 * x**3 - 6 * x**2 + 21.5 * x - 22,
        lambda x: 1.5 * x**2 - 12 * x + 21.5,
        lambda x: 3 * x - 12,
        (0.0, 3.0),
        3.0,
        _exp({
            "g1": (_OUT, c, None),
            "g2": (_IN, c, TableRow(20, 1.7639320225002113, 7.105427357601002e-15)),
            "g3": (_OUT, c, None),
            "g4": (_IN, c, TableRow(5, 1.7639320224170847, 4.156319732828706e-10)),
            "g5": (_NO, c, None),
            "g6": (_NO, c, None),
            "newton": (_NO, c, None),
            "steffensen": (_OUT, c, None),
        }),
        aliases=("0.5x^3-6x^2+21.5x-22",),
    )


def _p8() -> Problem:
    c = "Example 8: g-Steffensen convergent just for g5"
    cb = "Example 8: Newton's and Steffensen's methods converge to a root outside the interval"
    return Problem(
        "P8",
        "cos(x)",
        math.cos,
        lambda x: -math.sin(x),
        lambda x: -math.cos(x),
        (0.0, 3.5),
        3.5,
        _exp({
            "g1": (_NOT_IN, c, None),
            "g2": (_NOT_IN, c, None),
            "g3": (_NOT_IN, c, None),
            "g4": (_NOT_IN, c, None),
            "g5": (_IN, c, TableRow(5, 1.5707963267948966, 6.123233995736766e-17)),
            "g6": (_NOT_IN, c, None),
            "newton": (_OUT, cb, None),
            "steffensen": (_OUT, cb, None),
        }),
        closed_form_roots=_odd_half_pi,
        aliases=("cos(x)", "cosx"),
    )


def _p9() -> Problem:
    c = "Example 9: convergent for g5; divergent for g1, g2, g3, g4, g6"
    cb = "Example 9: Newton's method and Steffensen's method are divergent"
    return Problem(
        "P9",
        "10x exp(-x^2) - 1",
        lambda x: 10 * x * math.exp(-(x**2)) - 1,
        lambda x: 10 * math.exp(-(x**2)) * (1 - 2 * x**2),
        lambda x: 10 * math.exp(-(x**2)) * (4 * x**3 - 6 * x),
        (0.0, 3.0),
        3.0,
        _exp({
            "g1": (_NO, c, None),
            "g2": (_NO, c, None),
            "g3": (_NO, c, None),
            "g4": (_NO, c, None),
            "g5": (_IN, c, TableRow(8, 1.67963061042845, 2.220446049250313e-16)),
            "g6": (_NO, c, None),
            "newton": (_NO, cb, None),
            "steffensen": (_NO, cb, None),
        }),
        aliases=("10xe^(-x^2)-1", "10x*exp(-x^2)-1"),
    )


@functools.lru_cache(maxsize=None)
def _catalog() -> tuple[Problem, ...]:
    builders = (_p1, _p2, _p3, _p4, _p5, _p6, _p7, _p8, _p9)
    return tuple(resolve_reference_roots(b()) for b in builders)


def paper_catalog() -> list[Problem]:
    """Return problems P1..P9 in order, reference roots resolved."""
    return list(_catalog())


def problem_ids() -> list[str]:
    return [p.id for p in _catalog()]


def _norm(s: str) -> str:
    return "".join(s.lower().split())


def get(problem_id: str) -> Problem:
    """Look up a problem by id (``P1``..``P9``, case-insensitive) or formula alias.

    Raises:
        KeyError: If nothing matches.
    """
    key = _norm(problem_id)
    for p in _catalog():
        if key == p.id.lower() or key == _norm(p.display) or key in {_norm(a) for a in p.aliases}:
            return p
    raise KeyError(f"unknown problem {problem_id!r}; expected one of {problem_ids()}")
