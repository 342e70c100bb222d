"""Benchmark matrix over problems, methods and g functions; rendering and verification."""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Iterable, Optional, Sequence

from . import gfunctions, problems
from .solver import (
    METHOD_IDS,
    IterationTrace,
    Method,
    OutcomeClass,
    SolverConfig,
    Termination,
    classify_outcome,
    iterate,
)

X_TOL = 1e-8
RESIDUAL_FLOOR = 1e-8
RESIDUAL_FACTOR = 10.0

CSV_HEADER = ("problem", "method", "g", "n", "x_n", "abs_f", "termination", "outcome", "evals")


class UsageError(ValueError):
    """An identifier passed to the benchmark is not recognised."""


@dataclass(frozen=True)
class Cell:
    problem_id: str
    method_id: str
    g_id: Optional[str]
    n: int
    final_x: float
    residual: float
    termination: Termination
    outcome: OutcomeClass
    evals: int


@dataclass
class BenchReport:
    cells: list[Cell]
    config_echo: SolverConfig = field(default_factory=SolverConfig)

    def cell(self, problem_id: str, method_id: str, g_id: Optional[str] = None) -> Cell:
        for c in self.cells:
            if (c.problem_id, c.method_id, c.g_id) == (problem_id, method_id, g_id):
                return c
        raise KeyError((problem_id, method_id, g_id))


@dataclass(frozen=True)
class Mismatch:
    problem_id: str
    method_id: str
    g_id: Optional[str]
    reason: str
    expected: str
    citation: str


@dataclass
class Verification:
    matches: int
    mismatches: list[Mismatch]
    iteration_counts: list[dict]

    @property
    def exit_code(self) -> int:
        return 0 if not self.mismatches else 1


def _check_ids(given: Iterable[str], valid: Sequence[str], what: str) -> list[str]:
    out = list(given)
    bad = [x for x in out if x not in valid]
    if bad:
        raise UsageError(f"unknown {what}: {', '.join(bad)} (expected one of {', '.join(valid)})")
    return out


def _plan(problem_ids, g_ids, methods) -> list[tuple[problems.Problem, Method]]:
    pids = _check_ids(problem_ids, problems.problem_ids(), "problem")
    gids = _check_ids(g_ids, gfunctions.g_ids(), "g function")
    mids = _check_ids(methods, METHOD_IDS, "method")
    # canonical orders, whatever order the caller used
    pids = [p for p in problems.problem_ids() if p in pids]
    gids = [g for g in gfunctions.g_ids() if g in gids]

    plan = []
    for pid in pids:
        p = problems.get(pid)
        if "newton" in mids:
            plan.append((p, Method.newton()))
        if "steffensen" in mids:
            plan.append((p, Method.steffensen()))
        if "gsteffensen" in mids:
            plan.extend((p, Method.gsteffensen(g)) for g in gids)
    return plan


def _run_cell(p: problems.Problem, m: Method, cfg: SolverConfig) -> Cell:
    t = iterate(m, p, cfg)
    check_trace(t, cfg, p.x0)
    return Cell(
        p.id, m.id, m.g_id, t.steps, t.final_x, t.residual, t.termination,
        classify_outcome(t, p.interval), t.evals,
    )


def check_trace(trace: IterationTrace, cfg: SolverConfig, x0: float) -> None:
    """Assert the structural invariants of a finished trace."""
    its = trace.iterates
    _require(bool(its) and its[0].n == 0 and its[0].x == x0, "trace must start at row 0 = x0")
    _require(all(b.n == a.n + 1 for a, b in zip(its, its[1:])), "n must increase by one")
    _require(len(its) <= cfg.max_iter + 1, "trace longer than max_iter + 1")
    _require(trace.termination is not None, "trace has no termination reason")
    steps = trace.steps
    if trace.method_id == "newton":
        _require(trace.evals == steps + 1, f"eval count {trace.evals} for {steps} Newton steps")
    else:
        # a step rejected after evaluating f(x + s) costs one extra evaluation
        extra = trace.evals - (2 * steps + 1)
        _require(
            extra == 0
            or (
                extra == 1
                and trace.termination in (Termination.DEGENERATE_DENOMINATOR, Termination.NON_FINITE)
            ),
            f"eval count {trace.evals} inconsistent with {steps} steps",
        )


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise AssertionError(msg)


def run_matrix(
    problem_ids: Iterable[str] = (),
    g_ids: Iterable[str] = (),
    methods: Iterable[str] = ("gsteffensen",),
    cfg: SolverConfig = SolverConfig(),
    workers: int = 1,
) -> BenchReport:
    """Run every requested (problem, method, g) cell.

    Empty ``problem_ids``/``g_ids`` select the whole catalog. Unknown
    identifiers raise :class:`UsageError` before anything runs. Cells are
    ordered problem-major, baselines first, then g in catalog order,
    regardless of ``workers``.
    """
    problem_ids = list(problem_ids) or problems.problem_ids()
    g_ids = list(g_ids) or gfunctions.g_ids()
    plan = _plan(problem_ids, g_ids, methods)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            cells = list(pool.map(lambda pm: _run_cell(pm[0], pm[1], cfg), plan))
    else:
        cells = [_run_cell(p, m, cfg) for p, m in plan]
    return BenchReport(cells, cfg)


# -- rendering ----------------------------------------------------------------


def _num(v: float) -> str:
    return repr(float(v))


def _json_num(v: float):
    return v if math.isfinite(v) else repr(v)


def _cell_row(c: Cell) -> list[str]:
    return [
        c.problem_id, c.method_id, c.g_id or "", str(c.n), _num(c.final_x), _num(c.residual),
        c.termination.value, c.outcome.value, str(c.evals),
    ]


def _render_markdown(report: BenchReport) -> str:
    out: list[str] = []
    by_problem: dict[str, list[Cell]] = {}
    for c in report.cells:
        by_problem.setdefault(c.problem_id, []).append(c)
    for pid, cells in by_problem.items():
        p = problems.get(pid)
        a, b = p.interval
        out.append(f"### {pid}: f(x) = {p.display}, [a, b] = [{_num(a)}, {_num(b)}], x0 = {_num(p.x0)}")
        out.append("")
        out.append("| method | g | n | x_n | \\|f(x_n)\\| | termination | outcome |")
        out.append("|---|---|---:|---|---|---|---|")
        for c in cells:
            out.append(
                f"| {c.method_id} | {c.g_id or '-'} | {c.n} | {_num(c.final_x)} | "
                f"{_num(c.residual)} | {c.termination.value} | {c.outcome.value} |"
            )
        out.append("")
    return "\n".join(out)


def _render_csv(report: BenchReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(CSV_HEADER)
    for c in report.cells:
        w.writerow(_cell_row(c))
    return buf.getvalue()


def _render_json(report: BenchReport) -> str:
    doc = {
        "config": asdict(report.config_echo),
        "cells": [
            {
                "problem": c.problem_id,
                "method": c.method_id,
                "g": c.g_id,
                "n": c.n,
                "x_n": _json_num(c.final_x),
                "abs_f": _json_num(c.residual),
                "termination": c.termination.value,
                "outcome": c.outcome.value,
                "evals": c.evals,
            }
            for c in report.cells
        ],
    }
    return json.dumps(doc, indent=2) + "\n"


RENDERERS = {"markdown": _render_markdown, "csv": _render_csv, "json": _render_json}


def render(report: BenchReport, fmt: str = "markdown") -> str:
    """Render a report as ``markdown``, ``csv`` or ``json``."""
    try:
        return RENDERERS[fmt](report)
    except KeyError:
        raise UsageError(f"unknown format {fmt!r}; expected one of {', '.join(RENDERERS)}") from None


# -- verification -------------------------------------------------------------


def verify(report: BenchReport) -> Verification:
    """Compare a report with the published expectations, without re-running anything.

    A cell matches when its outcome class is one the expectation accepts
    and, for convergent cells with a published row, its final iterate is
    within 1e-8 of the published one and its residual is at most
    ``max(10 * published residual, 1e-8)``. Iteration counts are collected
    for information only.
    """
    index = {(c.problem_id, c.method_id, c.g_id): c for c in report.cells}
    matches = 0
    mismatches: list[Mismatch] = []
    counts: list[dict] = []

    for p in problems.paper_catalog():
        keys = [(p.id, "newton", None), (p.id, "steffensen", None)]
        keys += [(p.id, "gsteffensen", g) for g in gfunctions.g_ids()]
        for key in keys:
            exp = p.expectation(key[1], key[2])
            if exp is None:
                continue
            c = index.get(key)
            if c is None:
                mismatches.append(Mismatch(*key, "cell missing from report", exp.outcome.value, exp.citation))
                continue
            reasons = []
            if not exp.outcome.accepts(c.outcome):
                reasons.append(f"outcome {c.outcome.value}")
            row = exp.table
            if row is not None and exp.outcome.converges:
                if not abs(c.final_x - row.x) <= X_TOL:
                    reasons.append(f"x_n {_num(c.final_x)} vs published {_num(row.x)}")
                limit = max(RESIDUAL_FACTOR * row.abs_f, RESIDUAL_FLOOR)
                if not c.residual <= limit:
                    reasons.append(f"|f(x_n)| {_num(c.residual)} above {_num(limit)}")
                counts.append({"problem": p.id, "g": key[2], "n": c.n, "published_n": row.n})
            if reasons:
                mismatches.append(Mismatch(*key, "; ".join(reasons), exp.outcome.value, exp.citation))
            else:
                matches += 1
    return Verification(matches, mismatches, counts)


def render_verification(v: Verification, fmt: str = "text") -> str:
    if fmt == "json":
        doc = {
            "matches": v.matches,
            "mismatches": [asdict(m) for m in v.mismatches],
            "iteration_counts": v.iteration_counts,
            "exit_code": v.exit_code,
        }
        return json.dumps(doc, indent=2) + "\n"
    lines = [f"matches: {v.matches}", f"mismatches: {len(v.mismatches)}"]
    for m in v.mismatches:
        g = f"/{m.g_id}" if m.g_id else ""
        lines.append(f"  {m.problem_id} {m.method_id}{g}: {m.reason} (expected: {m.expected}; {m.citation})")
    lines.append("iteration counts (informational):")
    for c in v.iteration_counts:
        lines.append(f"  {c['problem']} {c['g']}: n = {c['n']} (published {c['published_n']})")
    return "\n".join(lines) + "\n"
