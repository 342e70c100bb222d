"""Convergence diagnostics for the g-Steffensen iteration.

Covers the divided difference ``rho`` and its limit at a root, a
finite-difference probe of ``phi'`` at the root, empirical order and error
constant estimators, and a bisection oracle for reference roots.
"""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass
from typing import TYPE_CHECKING, Callable, Optional, Sequence

from .exceptions import DegenerateDenominator, InsufficientData, NoBracket
from .gfunctions import GFunction

if TYPE_CHECKING:
    from .problems import Problem
    from .solver import IterationTrace

ScalarFn = Callable[[float], float]

ORDER_WINDOW = (1e-12, 1e-1)
CONSTANT_WINDOW = (1e-10, 1e-2)


@dataclass(frozen=True)
class OrderEstimate:
    per_triple: list[tuple[int, float]]
    pooled: Optional[float]
    usable_count: int

    @property
    def defined(self) -> bool:
        return self.pooled is not None


@dataclass(frozen=True)
class ErrorConstant:
    theoretical: float
    empirical: Optional[float]
    relative_gap: Optional[float]

    @classmethod
    def compare(cls, theoretical: float, empirical: Optional[float]) -> "ErrorConstant":
        gap = None
        if empirical is not None:
            gap = abs(empirical - theoretical) / max(abs(theoretical), 1e-30)
        return cls(theoretical, empirical, gap)


def rho(x: float, f: ScalarFn, g: GFunction) -> float:
    """Divided difference ``(f(x + g(f(x))) - f(x)) / g(f(x))``.

    Raises:
        DegenerateDenominator: If ``g(f(x))`` is zero or not finite, or the
            difference ``f(x + g(f(x))) - f(x)`` is exactly zero (as happens
            for ``f(x) = x``, ``g = sin`` at ``x = pi``, where the increment
            is below half an ulp of ``x``).
    """
    fx = f(x)
    s = g.eval(fx)
    if s == 0.0 or not math.isfinite(s):
        raise DegenerateDenominator(f"g(f(x)) = {s!r} at x = {x!r}")
    d = f(x + s) - fx
    if d == 0.0:
        raise DegenerateDenominator(f"f(x + g(f(x))) - f(x) = 0 at x = {x!r}")
    return d / s


def rho_limit_probe(
    problem: "Problem", g: GFunction, h_list: Sequence[float], root: Optional[float] = None
) -> list[tuple[float, Optional[float]]]:
    """Return ``(h, |rho(p + h) - f'(p)|)`` for each offset.

    Offsets where ``rho`` is degenerate yield ``(h, None)``.
    """
    if problem.df is None:
        raise ValueError(f"{problem.id} has no analytic derivative")
    p = problem.primary_root if root is None else root
    fp = problem.df(p)
    out: list[tuple[float, Optional[float]]] = []
    for h in h_list:
        try:
            out.append((h, abs(rho(p + h, problem.f, g) - fp)))
        except DegenerateDenominator:
            out.append((h, None))
    return out


def phi_derivative_probe(
    problem: "Problem", g: GFunction, h: float, root: Optional[float] = None
) -> float:
    """Central difference ``(phi(p+h) - phi(p-h)) / (2h)`` at the reference root.

    Raises:
        ValueError: If ``h`` is not positive.
        DegenerateDenominator: If ``phi`` cannot be evaluated at ``p +/- h``.
    """
    from .solver import iteration_map_phi

    if not h > 0:
        raise ValueError(f"h must be positive, got {h!r}")
    p = problem.primary_root if root is None else root
    hi = iteration_map_phi(p + h, problem.f, g)
    lo = iteration_map_phi(p - h, problem.f, g)
    return (hi - lo) / (2.0 * h)


def _errors(xs: Sequence[float], root: float) -> list[float]:
    return [x - root for x in xs]


def order_from_errors(errors: Sequence[float], window: tuple[float, float] = ORDER_WINDOW) -> OrderEstimate:
    """Estimate the convergence order from a sequence of signed errors.

    Each consecutive triple with all three magnitudes strictly inside
    ``window`` gives ``ln|e[n+1]/e[n]| / ln|e[n]/e[n-1]|``; the pooled value
    is their median.
    """
    lo, hi = window
    per: list[tuple[int, float]] = []
    for n in range(1, len(errors) - 1):
        a, b, c = (abs(errors[n - 1]), abs(errors[n]), abs(errors[n + 1]))
        if not all(lo < e < hi for e in (a, b, c)):
            continue
        den = math.log(b / a)
        if den == 0.0:
            continue
        per.append((n, math.log(c / b) / den))
    pooled = statistics.median(q for _, q in per) if per else None
    return OrderEstimate(per, pooled, len(per))


def empirical_order(trace: "IterationTrace", root: float) -> OrderEstimate:
    """Empirical convergence order of a trace against a known root."""
    return order_from_errors(_errors(trace.xs, root))


def asymptotic_constant(fp: float, fpp: float, gprime0: float) -> float:
    """Limit of ``e[n+1] / e[n]**2``: ``fpp/(2 fp) * (1 + gprime0 * fp)``.

    Raises:
        ValueError: If ``fp == 0`` (the root is not simple).
    """
    if fp == 0.0:
        raise ValueError("f'(p) = 0: the root is not simple")
    return (1.0 / fp) * (fpp / 2.0 + gprime0 * fp * fpp / 2.0)


def constant_from_errors(errors: Sequence[float], window: tuple[float, float] = CONSTANT_WINDOW) -> float:
    """Return ``e[n+1] / e[n]**2`` at the last ``n`` where both errors lie inside ``window``.

    Raises:
        InsufficientData: If no consecutive pair qualifies.
    """
    lo, hi = window
    for n in range(len(errors) - 2, -1, -1):
        if lo < abs(errors[n]) < hi and lo < abs(errors[n + 1]) < hi:
            return errors[n + 1] / errors[n] ** 2
    raise InsufficientData("no error inside the estimation window")


def empirical_constant(trace: "IterationTrace", root: float) -> float:
    """Empirical asymptotic error constant of a trace, sign preserved."""
    return constant_from_errors(_errors(trace.xs, root))


def bisection_oracle(
    f: ScalarFn, a: float, b: float, tol: float = 1e-14, max_steps: int = 200
) -> float:
    """Bisect ``[a, b]`` until the bracket is at most ``2*tol`` wide.

    The sign change is kept between the bracket ends at every step. An exact
    zero at a midpoint is returned immediately.

    Raises:
        NoBracket: If ``f(a) * f(b) >= 0``.
    """
    if not tol > 0:
        raise ValueError(f"tol must be positive, got {tol!r}")
    fa, fb = f(a), f(b)
    if not (fa < 0 < fb or fb < 0 < fa):
        raise NoBracket(f"f({a!r}) = {fa!r} and f({b!r}) = {fb!r} do not change sign")
    if a > b:
        a, b, fa, fb = b, a, fb, fa
    for _ in range(max_steps):
        if b - a <= 2.0 * tol:
            break
        m = a + (b - a) / 2.0
        if m <= a or m >= b:
            break
        fm = f(m)
        if fm == 0.0:
            return m
        if (fm < 0) == (fa < 0):
            a, fa = m, fm
        else:
            b, fb = m, fm
    return a + (b - a) / 2.0
