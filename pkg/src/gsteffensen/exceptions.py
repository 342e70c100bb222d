"""Exceptions raised by the analysis helpers."""


class RootFindingError(Exception):
    """Base class for errors raised by this package."""


class DegenerateDenominator(RootFindingError):
    """The divided difference cannot be formed (zero increment or zero difference)."""


class InsufficientData(RootFindingError):
    """A trace holds no iterate inside the estimator's error window."""


class NoBracket(RootFindingError):
    """The endpoints handed to the bisection oracle do not bracket a sign change."""
