"""Derivative-free scalar root finding with the g-Steffensen iteration."""

from .analysis import (
    ErrorConstant,
    OrderEstimate,
    asymptotic_constant,
    bisection_oracle,
    empirical_constant,
    empirical_order,
    phi_derivative_probe,
    rho,
    rho_limit_probe,
)
from .bench import BenchReport, render, run_matrix, verify
from .exceptions import DegenerateDenominator, InsufficientData, NoBracket, RootFindingError
from .gfunctions import GFunction, catalog, validate_g
from .problems import Problem, paper_catalog, resolve_reference_roots
from .solver import (
    IterationTrace,
    Method,
    OutcomeClass,
    SolverConfig,
    StepKind,
    StepResult,
    Termination,
    classify_outcome,
    g_steffensen_step,
    iterate,
    iteration_map_phi,
    newton_step,
    steffensen_step,
)

__version__ = "0.1.0"
