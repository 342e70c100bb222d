"""Catalog of increment functions ``g`` used by the g-Steffensen step.

Each member is continuously differentiable with an isolated zero at the
origin. ``identity`` recovers the classical Steffensen method.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

FD_STEP = 1e-6
FD_TOL = 1e-6
PROBE_POINTS = 64


@dataclass(frozen=True)
class GFunction:
    id: str
    eval: Callable[[float], float]
    gprime0: float
    display_name: str
    domain_note: str = ""

    def __call__(self, x: float) -> float:
        return self.eval(x)


@dataclass(frozen=True)
class GValidation:
    zero_at_origin: bool
    isolated_zero: bool
    fd_gprime0: float
    matches_declared: bool

    @property
    def ok(self) -> bool:
        return self.zero_at_origin and self.isolated_zero and self.matches_declared


def _identity(x: float) -> float:
    return x


def _expm1_neg(x: float) -> float:
    return math.exp(-x) - 1.0


_CATALOG: tuple[GFunction, ...] = (
    GFunction("identity", _identity, 1.0, "x"),
    GFunction("g1", math.sin, 1.0, "sin(x)"),
    GFunction("g2", lambda x: math.exp(x) - 1.0, 1.0, "exp(x) - 1"),
    GFunction("g3", lambda x: x * x, 0.0, "x^2"),
    GFunction("g4", lambda x: math.cos(x) - 1.0, 0.0, "cos(x) - 1"),
    GFunction(
        "g5",
        math.tan,
        1.0,
        "tan(x)",
        domain_note="poles at pi/2 + k*pi; a non-finite value ends the run as NonFinite",
    ),
    GFunction("g6", _expm1_neg, -1.0, "exp(-x) - 1"),
)

_BY_ID = {g.id: g for g in _CATALOG}


def catalog() -> list[GFunction]:
    """Return the seven catalog members in order identity, g1, ..., g6."""
    return list(_CATALOG)


def g_ids() -> list[str]:
    return [g.id for g in _CATALOG]


def get(g_id: str) -> GFunction:
    """Look up a catalog member by identifier.

    Raises:
        KeyError: If ``g_id`` is not a catalog identifier.
    """
    try:
        return _BY_ID[g_id]
    except KeyError:
        raise KeyError(f"unknown g function {g_id!r}; expected one of {g_ids()}") from None


def _safe(g: GFunction, x: float) -> float:
    try:
        return float(g.eval(x))
    except (ArithmeticError, ValueError):
        return math.nan


def probe_grid(n: int = PROBE_POINTS, lower: float = 1e-6, upper: float = 0.5) -> list[float]:
    """Log-spaced points from ``lower`` to ``upper`` inclusive.

    ``lower`` stays well above 1.5e-8, below which cos(x) - 1 rounds to 0.
    """
    lo = math.log10(lower)
    hi = math.log10(upper)
    return [10.0 ** (lo + (hi - lo) * k / (n - 1)) for k in range(n)]


def validate_g(g: GFunction) -> GValidation:
    """Probe ``g`` against the hypotheses of the local convergence theorem.

    The isolated-zero check is a finite probe: ``g`` must be finite and
    nonzero at 64 log-spaced points on each side of the origin. Evaluation
    failures count as a failed check rather than raising.
    """
    g0 = _safe(g, 0.0)
    zero_at_origin = g0 == 0.0

    isolated = True
    for t in probe_grid():
        for x in (t, -t):
            v = _safe(g, x)
            if not math.isfinite(v) or v == 0.0:
                isolated = False

    fd = (_safe(g, FD_STEP) - _safe(g, -FD_STEP)) / (2.0 * FD_STEP)
    matches = math.isfinite(fd) and abs(fd - g.gprime0) <= FD_TOL
    return GValidation(zero_at_origin, isolated, fd, matches)
