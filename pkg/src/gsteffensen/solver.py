"""Step formulas, the iteration driver and outcome classification.

All arithmetic is plain IEEE double precision through :mod:`math`; nothing
here accumulates in extended precision, so traces are bit-reproducible.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Callable, Optional

from .gfunctions import GFunction, get as get_g

if TYPE_CHECKING:
    from .problems import Problem

ScalarFn = Callable[[float], float]

CONVERGED_RESIDUAL = 1e-8


@dataclass(frozen=True)
class SolverConfig:
    tol_residual: float = 1e-15
    tol_step: float = 1e-15
    max_iter: int = 100
    divergence_bound: float = 1e8

    def __post_init__(self) -> None:
        if not self.tol_residual > 0:
            raise ValueError(f"tol_residual must be > 0, got {self.tol_residual}")
        if not self.tol_step >= 0:
            raise ValueError(f"tol_step must be >= 0, got {self.tol_step}")
        if int(self.max_iter) != self.max_iter or self.max_iter < 1:
            raise ValueError(f"max_iter must be a positive integer, got {self.max_iter}")
        if not self.divergence_bound > 0:
            raise ValueError(f"divergence_bound must be > 0, got {self.divergence_bound}")


class StepKind(str, enum.Enum):
    NEXT = "Next"
    AT_ROOT = "AtRoot"
    DEGENERATE_DENOMINATOR = "DegenerateDenominator"
    DERIVATIVE_VANISHED = "DerivativeVanished"
    NON_FINITE = "NonFinite"


@dataclass(frozen=True)
class StepResult:
    kind: StepKind
    x: Optional[float] = None

    @classmethod
    def next(cls, x: float) -> "StepResult":
        return cls(StepKind.NEXT, x)

    @classmethod
    def at_root(cls, x: float) -> "StepResult":
        return cls(StepKind.AT_ROOT, x)


class Termination(str, enum.Enum):
    RESIDUAL_MET = "ResidualMet"
    STEP_MET = "StepMet"
    MAX_ITER_REACHED = "MaxIterReached"
    DIVERGED = "Diverged"
    DEGENERATE_DENOMINATOR = "DegenerateDenominator"
    NON_FINITE = "NonFinite"


class OutcomeClass(str, enum.Enum):
    CONVERGED_IN_INTERVAL = "ConvergedInInterval"
    CONVERGED_OUTSIDE_INTERVAL = "ConvergedOutsideInterval"
    DIVERGED = "Diverged"
    STALLED = "Stalled"

    @property
    def converged(self) -> bool:
        return self in (OutcomeClass.CONVERGED_IN_INTERVAL, OutcomeClass.CONVERGED_OUTSIDE_INTERVAL)


@dataclass(frozen=True)
class Iterate:
    n: int
    x: float
    fx: float


@dataclass
class IterationTrace:
    method_id: str
    problem_id: str
    g_id: Optional[str]
    iterates: list[Iterate] = field(default_factory=list)
    evals: int = 0
    termination: Optional[Termination] = None
    final_x: float = math.nan

    @property
    def steps(self) -> int:
        return self.iterates[-1].n

    @property
    def residual(self) -> float:
        return abs(self.iterates[-1].fx)

    @property
    def xs(self) -> list[float]:
        return [it.x for it in self.iterates]


def _ev(f: ScalarFn, x: float) -> float:
    """Evaluate ``f`` and map math-domain failures to NaN."""
    try:
        return float(f(x))
    except (ArithmeticError, ValueError):
        return math.nan


def _finite(*vals: float) -> bool:
    return all(math.isfinite(v) for v in vals)


# -- step formulas ------------------------------------------------------------


def _newton_update(x: float, fx: float, df: ScalarFn, tol: float) -> StepResult:
    if not _finite(x, fx):
        return StepResult(StepKind.NON_FINITE)
    if abs(fx) <= tol:
        return StepResult.at_root(x)
    d = _ev(df, x)
    if not math.isfinite(d):
        return StepResult(StepKind.NON_FINITE)
    if d == 0.0:
        return StepResult(StepKind.DERIVATIVE_VANISHED)
    xn = x - fx / d
    if not math.isfinite(xn):
        return StepResult(StepKind.NON_FINITE)
    return StepResult.next(xn)


def _gsteffensen_update(
    x: float, fx: float, f: ScalarFn, g: GFunction, tol: float
) -> tuple[StepResult, bool]:
    """One g-Steffensen update given a precomputed ``fx = f(x)``.

    Returns the step result and whether ``f(x + s)`` was evaluated.
    """
    if not _finite(x, fx):
        return StepResult(StepKind.NON_FINITE), False
    # residual first: the update is 0/0 at an exact root
    if abs(fx) <= tol:
        return StepResult.at_root(x), False
    s = _ev(g.eval, fx)
    if not math.isfinite(s):
        return StepResult(StepKind.NON_FINITE), False
    if s == 0.0:
        return StepResult(StepKind.DEGENERATE_DENOMINATOR), False
    fxs = _ev(f, x + s)
    if not math.isfinite(fxs):
        return StepResult(StepKind.NON_FINITE), True
    d = fxs - fx
    if d == 0.0:
        return StepResult(StepKind.DEGENERATE_DENOMINATOR), True
    xn = x - s * fx / d
    if not math.isfinite(xn):
        return StepResult(StepKind.NON_FINITE), True
    return StepResult.next(xn), True


def newton_step(x: float, f: ScalarFn, df: ScalarFn, tol: float = 1e-15) -> StepResult:
    """Apply one Newton update ``x - f(x)/df(x)``."""
    return _newton_update(x, _ev(f, x), df, tol)


def g_steffensen_step(x: float, f: ScalarFn, g: GFunction, tol: float = 1e-15) -> StepResult:
    """Apply one g-Steffensen update.

    With ``s = g(f(x))`` and ``d = f(x + s) - f(x)`` the next point is
    ``x - s*f(x)/d``. ``AtRoot`` is returned when ``|f(x)| <= tol``;
    ``DegenerateDenominator`` when ``s`` or ``d`` is exactly zero.
    """
    return _gsteffensen_update(x, _ev(f, x), f, g, tol)[0]


def steffensen_step(x: float, f: ScalarFn, tol: float = 1e-15) -> StepResult:
    """Classical Steffensen step, i.e. g-Steffensen with the identity ``g``."""
    return g_steffensen_step(x, f, get_g("identity"), tol)


def iteration_map_phi(x: float, f: ScalarFn, g: GFunction) -> float:
    """Evaluate ``phi(x) = x - f(x)/rho(x)``.

    ``phi`` fixes every root of ``f``; at a point where ``f(x) == 0`` the
    input is returned unchanged.

    Raises:
        DegenerateDenominator: If ``rho`` cannot be formed at ``x``.
    """
    from .analysis import rho

    fx = _ev(f, x)
    if fx == 0.0:
        return x
    return x - fx / rho(x, f, g)


# -- driver -------------------------------------------------------------------


@dataclass(frozen=True)
class Method:
    """Which update rule :func:`iterate` drives."""

    id: str
    g: Optional[GFunction] = None

    @classmethod
    def newton(cls) -> "Method":
        return cls("newton")

    @classmethod
    def steffensen(cls) -> "Method":
        return cls("steffensen", get_g("identity"))

    @classmethod
    def gsteffensen(cls, g: GFunction | str) -> "Method":
        return cls("gsteffensen", get_g(g) if isinstance(g, str) else g)

    @property
    def g_id(self) -> Optional[str]:
        return self.g.id if self.id == "gsteffensen" and self.g is not None else None


METHOD_IDS = ("newton", "steffensen", "gsteffensen")


def iterate(
    method: Method,
    problem: "Problem",
    cfg: SolverConfig = SolverConfig(),
    x0: Optional[float] = None,
) -> IterationTrace:
    """Run ``method`` on ``problem`` from its initial point until a stop rule fires.

    Stop rules, checked after every step in this order: non-finite iterate or
    residual, ``|x_n| > divergence_bound``, ``|f(x_n)| <= tol_residual``,
    relative step ``<= tol_step``, ``n == max_iter``. A degenerate step ends
    the run where it stands. Row 0 of the trace is the initial point and ``n``
    counts completed steps.
    """
    if method.id == "newton" and problem.df is None:
        raise ValueError(f"Newton's method needs an analytic derivative for {problem.id}")
    if method.id != "newton" and method.g is None:
        raise ValueError(f"method {method.id!r} needs a g function")

    f = problem.f
    x = float(problem.x0 if x0 is None else x0)
    fx = _ev(f, x)
    trace = IterationTrace(method.id, problem.id, method.g_id, [Iterate(0, x, fx)], evals=1)

    def finish(term: Termination) -> IterationTrace:
        trace.termination = term
        trace.final_x = trace.iterates[-1].x
        return trace

    if not _finite(x, fx):
        return finish(Termination.NON_FINITE)
    if abs(fx) <= cfg.tol_residual:
        return finish(Termination.RESIDUAL_MET)

    n = 0
    while True:
        if method.id == "newton":
            res = _newton_update(x, fx, problem.df, cfg.tol_residual)
        else:
            res, used = _gsteffensen_update(x, fx, f, method.g, cfg.tol_residual)
            trace.evals += used

        if res.kind is StepKind.AT_ROOT:
            return finish(Termination.RESIDUAL_MET)
        if res.kind in (StepKind.DEGENERATE_DENOMINATOR, StepKind.DERIVATIVE_VANISHED):
            return finish(Termination.DEGENERATE_DENOMINATOR)
        if res.kind is StepKind.NON_FINITE:
            return finish(Termination.NON_FINITE)

        xn = res.x
        n += 1
        fx = _ev(f, xn)
        trace.evals += 1
        trace.iterates.append(Iterate(n, xn, fx))
        step = abs(xn - x)
        x = xn

        if not math.isfinite(fx):
            return finish(Termination.NON_FINITE)
        if abs(x) > cfg.divergence_bound:
            return finish(Termination.DIVERGED)
        if abs(fx) <= cfg.tol_residual:
            return finish(Termination.RESIDUAL_MET)
        if step <= cfg.tol_step * max(1.0, abs(x)):
            return finish(Termination.STEP_MET)
        if n >= cfg.max_iter:
            return finish(Termination.MAX_ITER_REACHED)


def classify_outcome(
    trace: IterationTrace, interval: tuple[float, float], accept: float = CONVERGED_RESIDUAL
) -> OutcomeClass:
    """Map a finished trace onto convergence inside/outside ``interval`` or failure.

    A run that stopped on the residual rule converged. A step-size or
    degenerate-denominator stop converged only if the residual had already
    reached ``accept`` (the plateau case); otherwise it stalled.
    Divergence-bound and non-finite stops are divergence, as is an exhausted
    iteration cap with the residual still above ``accept``.
    """
    a, b = interval
    x = trace.final_x
    term = trace.termination
    if not math.isfinite(x) or term in (Termination.NON_FINITE, Termination.DIVERGED):
        return OutcomeClass.DIVERGED
    r = trace.residual
    if term is Termination.RESIDUAL_MET or (math.isfinite(r) and r <= accept):
        if a <= x <= b:
            return OutcomeClass.CONVERGED_IN_INTERVAL
        return OutcomeClass.CONVERGED_OUTSIDE_INTERVAL
    if term is Termination.MAX_ITER_REACHED:
        return OutcomeClass.DIVERGED
    return OutcomeClass.STALLED
