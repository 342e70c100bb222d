"""Exit criteria for the package, one test per criterion.

Each test records a PASS/FAIL line that is printed in the terminal summary.
"""

import math
import random
import time


from gsteffensen import problems
from gsteffensen.analysis import (
    asymptotic_constant,
    bisection_oracle,
    empirical_constant,
    empirical_order,
    phi_derivative_probe,
    rho_limit_probe,
)
from gsteffensen.bench import check_trace, render, render_verification, run_matrix, verify
from gsteffensen.exceptions import DegenerateDenominator
from gsteffensen.gfunctions import catalog, get
from gsteffensen.solver import (
    METHOD_IDS,
    Method,
    SolverConfig,
    StepKind,
    StepResult,
    g_steffensen_step,
    iterate,
    iteration_map_phi,
    newton_step,
    steffensen_step,
)

from conftest import record, ulp_distance

CATALOG = problems.paper_catalog()


def published_cells():
    for p in CATALOG:
        for g_id, exp in p.expected.items():
            if exp.table is not None:
                yield p, g_id, exp.table


def test_criterion_1_table_roots():
    start = time.perf_counter()
    errs = []
    for p, g_id, row in published_cells():
        t = iterate(Method.gsteffensen(g_id), p)
        errs.append((abs(t.final_x - row.x), p.id, g_id))
    elapsed = time.perf_counter() - start
    worst = max(errs)
    ok = worst[0] <= 1e-8 and elapsed < 0.1
    record(
        "1 table roots",
        ok,
        f"{len(errs)} published cells, max |x_n - published| = {worst[0]:.3g} ({worst[1]}/{worst[2]}), "
        f"{elapsed * 1000:.1f} ms",
    )
    assert worst[0] <= 1e-8
    assert elapsed < 0.1


def test_criterion_2_table_residuals():
    bad = []
    for p, g_id, row in published_cells():
        t = iterate(Method.gsteffensen(g_id), p)
        limit = max(10 * row.abs_f, 1e-8)
        if not t.residual <= limit:
            bad.append((p.id, g_id, t.residual, limit))
    record("2 table residuals", not bad, f"{len(bad)} cell(s) above max(10*published, 1e-8)")
    assert not bad


def test_criterion_3_qualitative_matrix():
    report = run_matrix(methods=METHOD_IDS)
    v = verify(report)
    record("3 qualitative matrix", v.exit_code == 0, f"{v.matches} matches, {len(v.mismatches)} mismatches")
    assert v.exit_code == 0, render_verification(v)


ORDER_CELLS = [("P1", "g1"), ("P1", "g2"), ("P2", "g1"), ("P2", "g6"), ("P4", "g1"), ("P6", "g6")]


def test_criterion_4_quadratic_order():
    lines, ok = [], True
    for pid, g_id in ORDER_CELLS:
        p = problems.get(pid)
        est = empirical_order(iterate(Method.gsteffensen(g_id), p), p.primary_root)
        good = est.usable_count >= 2 and 1.5 <= est.pooled <= 2.6
        ok &= good
        lines.append(f"{pid}x{g_id}={est.pooled:.3f}({est.usable_count})")
    record("4 quadratic order", ok, ", ".join(lines))
    assert ok


def test_criterion_5_error_constant(quadratic):
    lines, ok = [], True
    for g_id in ("identity", "g1", "g2", "g6"):
        g = get(g_id)
        theory = asymptotic_constant(2.0, 2.0, g.gprime0)
        emp = empirical_constant(iterate(Method.gsteffensen(g), quadratic), 1.0)
        if theory == 0.0:
            good = abs(emp) <= 0.1
        else:
            good = abs(emp - theory) / abs(theory) <= 0.25
        ok &= good
        lines.append(f"{g_id}: {emp:.4f} vs {theory}")
    record("5 error constant", ok, "; ".join(lines))
    assert ok


def test_criterion_6_rho_phi_probes():
    ok, lines = True, []
    for pid in ("P2", "P3"):
        p = problems.get(pid)
        devs = [d for _, d in rho_limit_probe(p, get("identity"), [1e-2, 1e-3, 1e-4])]
        dec = None not in devs and devs[0] > devs[1] > devs[2]
        ok &= dec
        for g_id in ("identity", "g1"):
            d = phi_derivative_probe(p, get(g_id), 1e-5)
            ok &= abs(d) <= 1e-3
            lines.append(f"phi'({pid},{g_id})={d:.2g}")
        lines.append(f"rho {pid} decreasing={dec}")
    record("6 rho/phi probes", ok, ", ".join(lines))
    assert ok


def test_criterion_7_oracle_agreement():
    # bisect independently of any closed-form override
    worst = 0.0
    for p, g_id, row in published_cells():
        a, b = row.x - 0.05, row.x + 0.05
        r = bisection_oracle(p.f, a, b, 1e-14)
        worst = max(worst, abs(r - row.x))
    assert abs(bisection_oracle(lambda x: x**3 - x - 1, 1, 2, 1e-14) - 1.324717957244746) <= 1e-9
    assert abs(bisection_oracle(math.cos, 1, 2, 1e-14) - math.pi / 2) <= 1e-9
    record("7 oracle agreement", worst <= 1e-9, f"max |published root - bisection root| = {worst:.3g}")
    assert worst <= 1e-9


def test_criterion_8_property_suites():
    failures = []

    # fixed point at root
    for p in CATALOG:
        for r in p.reference_roots:
            if abs(p.f(r)) <= 1e-15:
                if newton_step(r, p.f, p.df) != StepResult.at_root(r):
                    failures.append(("fixed point", p.id, "newton"))
                for g in catalog():
                    if g_steffensen_step(r, p.f, g) != StepResult.at_root(r):
                        failures.append(("fixed point", p.id, g.id))

    # identity-g reduction, 1000 seeded pairs
    rng = random.Random(20201015)
    identity = get("identity")
    for _ in range(1000):
        p = rng.choice(CATALOG)
        a, b = p.interval
        x = rng.uniform(a - 5, b + 5)
        s1, s2 = steffensen_step(x, p.f), g_steffensen_step(x, p.f, identity)
        if s1.kind is not s2.kind or (s1.x is not None and s1.x.hex() != s2.x.hex()):
            failures.append(("reduction", p.id, x))

    # phi / step agreement within 4 ulp
    for p in CATALOG:
        a, b = p.interval
        for g in catalog():
            for k in range(100):
                x = a + (b - a) * (k + 0.5) / 100
                step = g_steffensen_step(x, p.f, g)
                if step.kind is not StepKind.NEXT:
                    continue
                try:
                    phi = iteration_map_phi(x, p.f, g)
                except DegenerateDenominator:
                    continue
                if math.isfinite(phi) and ulp_distance(phi, step.x, max(abs(x), abs(phi), abs(step.x))) > 4:
                    failures.append(("phi/step", p.id, g.id, x))

    # well-formed, deterministic traces
    cfg = SolverConfig()
    methods = [Method.newton(), Method.steffensen()] + [Method.gsteffensen(g) for g in catalog()]
    for p in CATALOG:
        for m in methods:
            t1, t2 = iterate(m, p, cfg), iterate(m, p, cfg)
            try:
                check_trace(t1, cfg, p.x0)
            except AssertionError as exc:
                failures.append(("trace", p.id, m.id, str(exc)))
            if repr(t1) != repr(t2):
                failures.append(("determinism", p.id, m.id))
    a = render(run_matrix(methods=METHOD_IDS), "json")
    b = render(run_matrix(methods=METHOD_IDS, workers=4), "json")
    if a != b:
        failures.append(("determinism", "report"))

    record("8 property suites", not failures, f"{len(failures)} failure(s)")
    assert not failures, failures[:10]


def test_criterion_9_runtime():
    start = time.perf_counter()
    report = run_matrix(methods=METHOD_IDS)
    render(report, "markdown")
    v = verify(report)
    elapsed = time.perf_counter() - start
    record("9 runtime", elapsed < 1.0 and v.exit_code == 0, f"bench + verify in {elapsed * 1000:.1f} ms")
    assert elapsed < 1.0
