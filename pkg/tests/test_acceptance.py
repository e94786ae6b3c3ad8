"""One test per acceptance criterion; each prints a single PASS/FAIL line."""

import os
import subprocess
import sys
import time

from qwscreen.field import ONE, P, Q
from qwscreen.series import QProductSpec, qpochhammer_series
from qwscreen.solver import (
    SOLVERS,
    _one_boson_chain,
    boson_screen_law,
    branch_feasible,
    lambda33_two_routes,
    lambda_pair_product,
    mono,
    solve_boson_fermion,
    solve_one_boson,
    solve_one_fermion,
    solve_two_boson,
    solve_two_fermion,
    structural_second_summand,
)
from qwscreen.suites import (
    DEFAULT_SAMPLES,
    SUITES,
    cross_56_checks,
    fock_oracle_checks,
    theta_target,
    reordering_literal,
)
from qwscreen.field import NumericContext
from qwscreen.voa import contract, exchange_ratio, pair_ratio

N = 24


def test_ac1_one_boson_reconstruction(acceptance_line):
    t0 = time.perf_counter()
    model = solve_one_boson(N)
    c = model.constants
    g_closed = (Q / (P * P)) * (c["P"] * (P * P / Q) - 1) / (1 - c["P"] / Q)
    ok = c["p'1"] == Q / (P * P) and c["g2"] == g_closed and model.passes(N)
    elapsed = time.perf_counter() - t0
    ok = ok and elapsed < 5
    zero = c["p'1"]
    acceptance_line("AC1", ok, f"p'1={zero}, g2={c['g2']}, commutant n=1..{N}, {elapsed:.2f}s")
    assert ok


def test_ac2_uniqueness(acceptance_line):
    broken = solve_one_boson(N, perturb="p")
    ok = solve_one_boson(N).passes(N) and not broken.passes(N)
    acceptance_line("AC2", ok, "correct P passes, P*q fails the commutant check")
    assert ok


def test_ac3_lambda_ratio(acceptance_line):
    model = solve_one_boson(N)
    L1, L2 = model.l[0].laws[0], model.l[1].laws[0]
    ok = all(L1.eval(n) == -L2.eval(n) * (P / Q).inflate(n) for n in range(1, N + 1))
    acceptance_line("AC3", ok, f"lambda1(n) = -lambda2(n) q^(n(beta-1)) for n=1..{N}")
    assert ok


def test_ac4_fermion_family(acceptance_line):
    t0 = time.perf_counter()
    model = solve_one_fermion(mono(), mono(0, 1), N)
    structural = structural_second_summand(model)
    closed = -(-ONE + P * Q)
    structural_ok = structural.same_operator(model.l[1]) and structural.laws[0].pos == closed
    literal = reordering_literal(model, 4)
    elapsed = time.perf_counter() - t0
    ok = structural_ok and literal.status == "pass" and elapsed < 60
    acceptance_line(
        "AC4",
        ok,
        f"structural summand matches closed form: {structural_ok}; coefficient equality at L=4: {literal.detail}; {elapsed:.1f}s",
    )
    assert ok


def test_ac5_sl3_two_routes(acceptance_line):
    model = solve_two_boson(None, N)
    q2p = model.constants["q'2"].as_monomial()[1]
    qm = mono(1, 0)
    f21 = qpochhammer_series(QProductSpec(q2p.inverse() * mono(2, -1), qm), N) * qpochhammer_series(
        QProductSpec(q2p.inverse() * mono(2, -2), qm), N
    ).inverse()
    f12 = qpochhammer_series(QProductSpec(q2p * mono(-1, 2), qm), N) * qpochhammer_series(
        QProductSpec(q2p * mono(-1, 1), qm), N
    ).inverse()
    S1, S2 = model.screens
    via_kernel_21 = contract(S2, S1, model.spec, N).series
    via_kernel_12 = contract(S1, S2, model.spec, N).series
    routes = all(f21[k] == via_kernel_21[k] and f12[k] == via_kernel_12[k] for k in range(N + 1))
    infeasible = not branch_feasible(_one_boson_chain(), boson_screen_law(), q2p, mono(-1, 0))
    ok = routes and infeasible
    acceptance_line("AC5", ok, f"f21, f12 agree to order {N}: {routes}; q'=q^-1 branch infeasible: {infeasible}")
    assert ok


def test_ac6_lambda33(acceptance_line):
    model = solve_boson_fermion(None, N)
    a, b = lambda33_two_routes(model)
    diff = lambda_pair_product(model, 2, 2) - lambda_pair_product(model, 0, 0)
    target = P / Q + Q / P - P - ONE / P
    ok = all(a.inflate(n) == b.inflate(n) and diff.inflate(n) == target.inflate(n) for n in range(1, N + 1))
    acceptance_line("AC6", ok, f"two routes agree and difference identity holds for n=1..{N}")
    assert ok


def test_ac7_theta_identity(acceptance_line):
    model = solve_boson_fermion(None, 1)
    entry = next(e for e in exchange_ratio(model.l, model.spec, 1).entries if (e.i, e.j) == (0, 0))
    errors, slowest = [], 0.0
    for q, beta, x in DEFAULT_SAMPLES:
        t0 = time.perf_counter()
        ctx = NumericContext(q, beta, budget=80)
        ratio = pair_ratio(entry, ctx, x) / theta_target(ctx, x)
        slowest = max(slowest, time.perf_counter() - t0)
        errors.append(abs(ratio - 1))
    ok = max(errors) < 1e-10 and slowest < 1
    acceptance_line("AC7", ok, f"max |LHS/RHS - 1| = {max(errors):.3e} over 3 samples; slowest {slowest * 1000:.1f} ms")
    assert ok


def test_ac8_two_fermion_and_cross(acceptance_line):
    model = solve_two_fermion(None, None, N)
    reference_forms = {c.name: c.agrees for c in model.comparisons if c.name.endswith("reference form")}
    m5 = solve_boson_fermion(None, N)
    m6 = solve_two_fermion(None, mono(1, -1), N)
    cross = cross_56_checks(m5, m6, N)
    cross_ok = all(c.status == "pass" for c in cross)
    ok = all(reference_forms.values()) and cross_ok
    acceptance_line("AC8", ok, f"reference closed forms {reference_forms}; cross-56 to order {N}: {cross_ok}")
    assert ok


def test_ac9_fock_oracle(acceptance_line):
    t0 = time.perf_counter()
    results = {kind: fock_oracle_checks(solve(N=8), 4, 8)[0] for kind, solve in sorted(SOLVERS.items())}
    elapsed = time.perf_counter() - t0
    ok = all(r.status == "pass" for r in results.values()) and elapsed < 120
    acceptance_line("AC9", ok, f"{len(results)} models at L=4, N=8; {elapsed:.1f}s")
    assert ok


def test_ac10_determinism(acceptance_line, tmp_path):
    env = dict(os.environ)
    differing = []
    for suite in sorted(SUITES):
        outputs = []
        for run in range(2):
            path = tmp_path / f"{suite}-{run}.json"
            subprocess.run([sys.executable, "-m", "qwscreen.cli", suite, "--json", str(path)], env=env, capture_output=True)
            outputs.append(path.read_bytes())
        if outputs[0] != outputs[1]:
            differing.append(suite)
    ok = not differing
    acceptance_line("AC10", ok, f"{len(SUITES)} suites run twice; differing: {differing or 'none'}")
    assert ok
