"""Acceptance suite: one check per acceptance criterion, each printing PASS/FAIL.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the summary lines.
Every check draws from its own generator seeded with its criterion number.
"""

import io
import json
import math
import time

import numpy as np

from seqspace import cli
from seqspace.conditions import (
    CONDITIONS,
    Status,
    enumerate_sup,
    evaluate_condition,
    row_total_sum,
    sign_split_sup,
)
from seqspace.core import GeneralizedMeansParams, format_number
from seqspace.duals import abel_identity_check
from seqspace.factories import cesaro_params, euler_params, weighted_mean_params
from seqspace.norms import (
    luxemburg_norm,
    maddox_paranorm,
    midpoint_strictness,
    modular,
    modular_convergence_harness,
    paranorm_h_tilde,
)
from seqspace.sources import generator
from seqspace.triangle import (
    forward_transform,
    inverse_coeffs,
    inverse_coeffs_det,
    inverse_transform,
    materialize_operator,
    means_matrix_entry,
)

# tolerances, as stated in the criteria
ROUNDTRIP_REL = 1e-9
ROUNDTRIP_SECONDS = 5.0
COEFF_REL = 1e-8
CONV_RESIDUAL = 1e-9
ABEL_TOL = 1e-9
PARANORM_SLACK = 1e-12
PARANORM_MATCH = 1e-14
MODULAR_SLACK = 1e-10
LUX_RESIDUAL = 1e-8
E0_TOL = 1e-10
ROTUND_MARGIN = 1e-12
ROTUND_GAP = 1e-3
HARNESS_LIMIT = 1e-6
EULER_ROWSUM = 1e-12
CESARO_TOL = 1e-12


def report(num, name, ok, detail):
    print(f"[{num:2d}] {'PASS' if ok else 'FAIL'} {name}: {detail}")
    assert ok, detail


def signed_uniform(rng, size, lo=0.1, hi=2.0):
    return rng.uniform(lo, hi, size) * rng.choice([-1.0, 1.0], size)


def random_params(rng, n):
    return GeneralizedMeansParams(*(signed_uniform(rng, n) for _ in range(3)))


def moderate_params(rng, n):
    # positive r, t and a dominant s_0 keep the transform well scaled
    s = signed_uniform(rng, n, 0.1, 1.0)
    s[0] = rng.uniform(1.0, 2.0)
    return GeneralizedMeansParams(rng.uniform(0.5, 2.0, n), s, rng.uniform(0.5, 2.0, n))


def rescaled(params, p, x, rng):
    """x scaled so its Luxemburg norm is log-uniform in [0.1, 10]."""
    target = 10.0 ** rng.uniform(-1.0, 1.0)
    return x * (target / luxemburg_norm(params, p, x).value)


def test_inverse_roundtrip():
    rng = np.random.default_rng(1)
    worst, failures = 0.0, 0
    start = time.perf_counter()
    for _ in range(200):
        n = int(rng.integers(1, 65))
        params = random_params(rng, n)
        x = rng.uniform(-5.0, 5.0, n)
        back = inverse_transform(params, forward_transform(params, x)).values
        err = np.max(np.abs(back - x)) / np.max(np.abs(x))
        worst = max(worst, err)
        failures += err > ROUNDTRIP_REL
    elapsed = time.perf_counter() - start
    ok = failures == 0 and elapsed < ROUNDTRIP_SECONDS
    report(1, "inverse roundtrip", ok,
           f"{failures}/200 above {ROUNDTRIP_REL:g}, worst rel err {worst:.3g}, {elapsed:.2f}s")


def test_coefficient_oracle():
    rng = np.random.default_rng(2)
    worst_rel, worst_res, worst_abs = 0.0, 0.0, 0.0
    for _ in range(50):
        s = signed_uniform(rng, 64)
        rec = inverse_coeffs(s, 13).D
        det = np.array([inverse_coeffs_det(s, n) for n in range(13)])
        worst_rel = max(worst_rel, float(np.max(np.abs(rec - det) / np.abs(det))))
        coeffs = inverse_coeffs(s, 64)
        worst_res = max(worst_res, float(np.max(coeffs.convolution_residual(s))))
        raw = np.convolve(coeffs.alternating, s[:64])[:64] - np.eye(1, 64)[0]
        worst_abs = max(worst_abs, float(np.max(np.abs(raw))))
    ok = worst_rel <= COEFF_REL and worst_res <= CONV_RESIDUAL
    report(2, "coefficient oracle", ok,
           f"worst rel err {worst_rel:.3g} (n<=12), worst scaled residual {worst_res:.3g} (N=64, unscaled {worst_abs:.3g})")


def test_abel_identity():
    rng = np.random.default_rng(3)
    worst, failures = 0.0, 0
    for _ in range(200):
        n = int(rng.integers(0, 33))
        m = n + 1
        params = random_params(rng, m)
        a, x = rng.uniform(-5.0, 5.0, m), rng.uniform(-5.0, 5.0, m)
        lhs, rhs = abel_identity_check(params, a, x, n)
        err = abs(lhs - rhs) / (1.0 + abs(lhs))
        worst = max(worst, err)
        failures += err > ABEL_TOL
    report(3, "Abel identity", failures == 0, f"{failures}/200 above {ABEL_TOL:g}, worst {worst:.3g}")


def test_paranorm_axioms():
    rng = np.random.default_rng(4)
    worst_sub, worst_scale, worst_match = -math.inf, -math.inf, 0.0
    for _ in range(500):
        n = int(rng.integers(1, 33))
        params = moderate_params(rng, n)
        p = rng.uniform(0.2, 3.0, n)
        x, z = rng.uniform(-1.0, 1.0, n), rng.uniform(-1.0, 1.0, n)
        alpha = signed_uniform(rng, 1, 0.01, 4.0)[0]
        hx, hz = paranorm_h_tilde(params, p, x), paranorm_h_tilde(params, p, z)
        worst_sub = max(worst_sub, paranorm_h_tilde(params, p, x + z) - hx - hz)
        worst_scale = max(worst_scale, paranorm_h_tilde(params, p, alpha * x) - max(1.0, abs(alpha)) * hx)
        # g-tilde of Tx, with Tx from the dense triangle rather than the fast kernel
        tx = np.asarray(materialize_operator(params, n, "ADelta")) @ x
        worst_match = max(worst_match, abs(hx - maddox_paranorm(p, tx, "sum")))
    ok = worst_sub <= PARANORM_SLACK and worst_scale <= PARANORM_SLACK and worst_match <= PARANORM_MATCH
    report(4, "paranorm axioms", ok,
           f"subadditivity excess {worst_sub:.3g}, scalar excess {worst_scale:.3g}, "
           f"|h~(x) - g~(Tx)| {worst_match:.3g}")


def _modular_clauses(params, p, x, M, alpha_lo, alpha_hi):
    """Excesses (should be <= 0) of every inequality clause on one sample."""
    sig = modular(params, p, x)
    norm = luxemburg_norm(params, p, x).value
    out = []
    # scaling clauses of the modular
    a = alpha_lo
    out.append(a ** M * modular(params, p, x / a) - sig)
    out.append(modular(params, p, a * x) - sig)
    b = alpha_hi
    out.append(sig - b ** M * modular(params, p, x / b))
    out.append(sig - b * sig)
    out.append(b * sig - modular(params, p, b * x))
    # norm versus modular
    if norm < 1:
        out.append(sig - norm)
        out.append(sig - 1.0)
    if norm > 1:
        out.append(norm - sig)
        out.append(1.0 - sig)
    if alpha_lo < norm:
        out.append(alpha_lo ** M - sig)
    if norm < alpha_hi:
        out.append(sig - alpha_hi ** M)
    return out, sig, norm


def test_modular_norm_relations():
    rng = np.random.default_rng(5)
    worst, worst_lux = -math.inf, 0.0
    for _ in range(500):
        n = int(rng.integers(1, 33))
        params = moderate_params(rng, n)
        p = rng.uniform(1.0, 3.0, n)
        p[p == 1.0] = 3.0
        x = rescaled(params, p, rng.uniform(-1.0, 1.0, n), rng)
        M = max(1.0, p.max())
        excess, sig, norm = _modular_clauses(params, p, x, M, rng.uniform(0.05, 1.0), rng.uniform(1.0, 5.0))
        worst = max(worst, max(excess))
        if sig > 1e-8:
            worst_lux = max(worst_lux, abs(modular(params, p, x / norm) - 1.0))
    e0_params = GeneralizedMeansParams(np.ones(4), [1.0, 0, 0, 0], np.ones(4))
    e0 = luxemburg_norm(e0_params, np.full(4, 2.0), [1.0, 0, 0, 0]).value
    e0_err = abs(e0 - math.sqrt(2.0))
    ok = worst <= MODULAR_SLACK and worst_lux <= LUX_RESIDUAL and e0_err <= E0_TOL
    report(5, "modular/norm relations", ok,
           f"worst clause excess {worst:.3g}, worst |sigma(x/||x||) - 1| {worst_lux:.3g}, "
           f"| ||e_0|| - sqrt 2 | {e0_err:.3g}")


def _on_sphere(params, p, x):
    return x / luxemburg_norm(params, p, x, tol=1e-14).value


def test_rotundity():
    rng = np.random.default_rng(6)
    worst, pairs = -math.inf, 0
    control = 0.0
    while pairs < 100:
        n = int(rng.integers(2, 33))
        params = moderate_params(rng, n)
        p = rng.uniform(1.0, 3.0, n)
        p[p == 1.0] = 3.0
        y = _on_sphere(params, p, rng.uniform(-1.0, 1.0, n))
        z = _on_sphere(params, p, rng.uniform(-1.0, 1.0, n))
        if np.max(np.abs(y - z)) <= ROTUND_GAP:
            continue
        pairs += 1
        rep = midpoint_strictness(params, p, y, z)
        worst = max(worst, rep.sigma_mid - (1.0 - ROTUND_MARGIN))
        control = max(control, abs(midpoint_strictness(params, p, y, y).sigma_mid - 1.0))
    ok = worst < 0 and control <= ROTUND_MARGIN
    report(6, "rotundity", ok,
           f"max sigma((y+z)/2) - (1 - 1e-12) = {worst:.3g}, y=z control |sigma - 1| {control:.3g}")


def test_harness_convergence():
    rng = np.random.default_rng(7)
    ok_all, worst_final = True, 0.0
    for _ in range(20):
        n = int(rng.integers(1, 33))
        params = moderate_params(rng, n)
        p = rng.uniform(1.0, 3.0, n)
        p[p == 1.0] = 3.0
        x = rescaled(params, p, rng.uniform(-1.0, 1.0, n), rng)
        trace = modular_convergence_harness(params, p, x, 25, perturbation=rng.uniform(-1.0, 1.0, n))
        worst_final = max(worst_final, float(trace.distance[-1]))
        ok_all &= trace.strictly_decreasing and trace.distance[-1] < HARNESS_LIMIT
    report(7, "modular convergence harness", ok_all, f"largest ||x^25 - x|| = {worst_final:.3g}")


def _exact_match(cid, a, p):
    """Sign-split closed form against brute-force enumeration, at L = N = 1."""
    if cid == "4.4":
        k1 = p <= 1
        closed = float(np.max(sign_split_sup(a[:, k1], p[k1]), initial=0.0))
        brute = max((enumerate_sup(a[:, [k]], p[[k]]) for k in np.flatnonzero(k1)), default=0.0)
    elif cid == "4.5":
        k2 = p > 1
        conj = p[k2] / (p[k2] - 1.0)
        closed = float(np.sum(sign_split_sup(a[:, k2], conj)))
        brute = enumerate_sup(a[:, k2], conj)
    elif cid == "4.16":
        closed = float(np.sum(sign_split_sup(a.T, np.ones(a.shape[0]))))
        brute = enumerate_sup(a.T, np.ones(a.shape[0]))
    else:
        closed = row_total_sum(a)
        brute = math.fsum(abs(math.fsum(a[n, k] for k in range(a.shape[1]))) for n in range(a.shape[0]))
    return closed, brute


def test_condition_evaluator():
    rng = np.random.default_rng(8)
    mismatches = {cid: 0 for cid in ("4.4", "4.5", "4.16", "4.21")}
    for _ in range(50):
        a = rng.uniform(-1.0, 1.0, (11, 11))
        p = rng.uniform(0.2, 3.0, 11)
        for cid in mismatches:
            closed, brute = _exact_match(cid, a, p)
            mismatches[cid] += closed != brute
    zero = np.zeros((64, 64))
    p_zero = np.linspace(0.3, 3.0, 64)
    zero_bad = [cid for cid in CONDITIONS
                if (v := evaluate_condition(cid, zero, p_zero)).status is not Status.HOLDS
                or v.bound_value != 0.0]
    growth = evaluate_condition("4.20", generator("row-constant", ratio=2.0), np.ones(64))
    diag = np.asarray(growth.diagnostic)
    growth_ok = (growth.status is Status.DIVERGES and [lv[0] for lv in growth.levels] == [16, 32, 64]
                 and bool(np.all(np.diff(diag) > 0)))
    ok = not any(mismatches.values()) and not zero_bad and growth_ok
    report(8, "condition evaluator exactness", ok,
           f"sign-split != enumeration on {mismatches} of 50; zero-matrix failures {zero_bad}; "
           f"2^n fixture {growth.status.value} trace {[float(format_number(v)) for v in diag]}")


def test_factories():
    worst_euler = 0.0
    for alpha in (0.05, 0.25, 0.5, 0.75, 0.95):
        for n in range(1, 21):
            A = np.asarray(materialize_operator(euler_params(alpha, n), n, "A"))
            worst_euler = max(worst_euler, float(np.max(np.abs(A.sum(axis=1) - 1.0))))
    rng = np.random.default_rng(9)
    u, v = signed_uniform(rng, 16), signed_uniform(rng, 16)
    wp = weighted_mean_params(u, v)
    exact = all(means_matrix_entry(wp, n, k) == u[n] * v[k] for n in range(16) for k in range(n + 1))
    worst_ces = 0.0
    for _ in range(20):
        n = int(rng.integers(1, 65))
        x = rng.uniform(-5.0, 5.0, n)
        y = forward_transform(cesaro_params(n), x).values
        worst_ces = max(worst_ces, float(np.max(np.abs(y - x / np.arange(1, n + 1)))))
    ok = worst_euler <= EULER_ROWSUM and exact and worst_ces <= CESARO_TOL
    report(9, "factories", ok,
           f"Euler row-sum error {worst_euler:.3g}, weighted entries exact={exact}, "
           f"Cesaro telescoping error {worst_ces:.3g}")


def _run(argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.main(argv, out=out, err=err)
    return code, out.getvalue()


def test_cli_contract(tmp_path):
    rng = np.random.default_rng(10)
    params = moderate_params(rng, 24)
    (tmp_path / "P.json").write_text(json.dumps(params.to_json()))
    x = rng.uniform(-5.0, 5.0, 24)
    (tmp_path / "x.csv").write_text(",".join(format_number(v) for v in x) + "\n")
    _, y_text = _run(["transform", "--params", str(tmp_path / "P.json"), "--in", str(tmp_path / "x.csv")])
    (tmp_path / "y.csv").write_text(y_text)
    _, back = _run(["transform", "--params", str(tmp_path / "P.json"), "--in", str(tmp_path / "y.csv"),
                    "--inverse"])
    original = (tmp_path / "x.csv").read_text().strip().split(",")
    recovered = [format_number(float(v)) for v in back.strip().split(",")]
    roundtrip_ok = original == recovered

    ones = ",".join(["1"] * 64) + "\n"
    (tmp_path / "p.csv").write_text(ones)
    fixtures = [
        ("4.29", {"generator": "identity"}, 0),
        ("4.20", {"generator": "row-constant", "ratio": 2}, 1),
        ("4.18", {"generator": "summation"}, 3),
    ]
    codes = []
    for cid, matrix, expected in fixtures:
        path = tmp_path / f"m{cid}.json"
        path.write_text(json.dumps(matrix))
        code, text = _run(["check-cond", "--id", cid, "--matrix", str(path), "--p", str(tmp_path / "p.csv"),
                           "--q", str(tmp_path / "p.csv")])
        status = json.loads(text)["status"]
        codes.append((cid, code, expected, Status(status).exit_code == code))
    codes_ok = all(code == expected and consistent for _, code, expected, consistent in codes)
    report(10, "CLI contract", roundtrip_ok and codes_ok,
           f"roundtrip at 9 digits {'identical' if roundtrip_ok else 'differs'}; "
           f"exit codes {[(c, code) for c, code, _, _ in codes]}")
