"""Acceptance criteria, one test per criterion.

Each test records a PASS/FAIL line through ``criterion_log``; the lines are
repeated in the terminal summary under "acceptance criteria".
"""

import math
import time

import numpy as np
import pytest
from scipy import stats

from privreg import (
    ChannelSpec,
    ConditionViolated,
    MechanismConfig,
    Scheme,
    ScheduleKind,
    TailQuery,
    additive_noise_bound,
    calibrate_additive_noise,
    calibrate_projection_noise,
    classification_experiment,
    coherent_simo_capacity,
    gaussian_smax_tail,
    generate_blobs,
    generate_random_dataset,
    least_squares,
    noncoherent_simo_capacity,
    objective,
    ridge_closed_form,
    ridge_norm_bound,
    ridge_relative_bound,
    run_trial,
    spectral_summary,
    sweep_epsilon,
    sweep_n,
    validate_dataset,
)
from privreg.bounds import additive_noise_delta
from privreg.cli import main
from privreg.experiments import MECHANISM_STREAM, derive_seed

pytestmark = pytest.mark.acceptance


def finish(log, number, ok, detail, elapsed, limit):
    ok_time = elapsed < limit
    detail = f"{detail}; {elapsed:.2f}s (limit {limit}s)"
    log(number, ok and ok_time, detail)
    assert ok, detail
    assert ok_time, detail


def test_criterion_1_calibration_equality(criterion_log):
    t0 = time.perf_counter()
    worst, checked = 0.0, 0
    for eps in (0.1, 0.25, 0.5, 1, 2):
        worst = max(worst, abs(coherent_simo_capacity(ChannelSpec(1, calibrate_additive_noise(eps), 0.0)) - eps))
        checked += 1
        for n_prime in (1, 16, 256):
            for f_sq in (0.0, 5.0):
                sigma_sq = calibrate_projection_noise(eps, n_prime, math.sqrt(f_sq))
                if sigma_sq == 0.0:
                    continue  # clamp active
                cap = coherent_simo_capacity(ChannelSpec(n_prime, sigma_sq, f_sq))
                worst = max(worst, abs(cap - eps))
                checked += 1
    elapsed = time.perf_counter() - t0
    finish(criterion_log, 1, worst <= 1e-12, f"{checked} channels, max |capacity - eps| = {worst:.2e}", elapsed, 1)


def test_criterion_2_solver_oracles(criterion_log):
    t0 = time.perf_counter()
    rng = np.random.default_rng(2)
    worst_ls = worst_rr = worst_grad = worst_stat = 0.0
    for _ in range(100):
        X = rng.uniform(-1, 1, (50, 10))
        y = X @ rng.uniform(-1, 1, 10) + 0.3 * rng.standard_normal(50)
        lam = float(rng.uniform(0.01, 10))
        G, b = X.T @ X, X.T @ y
        ref_ls = np.linalg.solve(G, b)
        ref_rr = np.linalg.solve(G + lam * np.eye(10), b)
        ls = least_squares(X, y).theta
        worst_ls = max(worst_ls, np.linalg.norm(ls - ref_ls) / np.linalg.norm(ref_ls))
        worst_rr = max(worst_rr, np.linalg.norm(ridge_closed_form(X, y, lam).theta - ref_rr) / np.linalg.norm(ref_rr))

        h = 1e-5
        def fd_grad(theta):
            return np.array([(objective(X, y, theta + h * e) - objective(X, y, theta - h * e)) / (2 * h)
                             for e in np.eye(10)])
        # analytic vs central difference at a generic point
        theta = ls + rng.standard_normal(10)
        g = 2 * X.T @ (X @ theta - y)
        worst_grad = max(worst_grad, np.linalg.norm(fd_grad(theta) - g) / np.linalg.norm(g))
        # at the solution the difference quotient vanishes relative to the gradient scale
        worst_stat = max(worst_stat, np.linalg.norm(fd_grad(ls)) / np.linalg.norm(2 * b))
    elapsed = time.perf_counter() - t0
    ok = worst_ls <= 1e-8 and worst_rr <= 1e-8 and worst_grad <= 1e-4 and worst_stat <= 1e-4
    detail = (f"lstsq rel err {worst_ls:.1e}, ridge rel err {worst_rr:.1e}, "
              f"gradient rel err {worst_grad:.1e}, gradient at optimum {worst_stat:.1e}")
    finish(criterion_log, 2, ok, detail, elapsed, 5)


def test_criterion_3_additive_bound_containment(criterion_log):
    t0 = time.perf_counter()
    n, d, eps, trials = 200, 20, 1.0, 200
    hits, probs, violated, kds = 0, [], 0, []
    for i in range(trials):
        ds = generate_random_dataset(n, d, i)
        ss = spectral_summary(ds)
        eta = run_trial(ds, MechanismConfig(Scheme.ADDITIVE_NOISE, eps, None, derive_seed(i, MECHANISM_STREAM)))
        try:
            rep = additive_noise_bound(ss, eps, n, d)
        except ConditionViolated:
            violated += 1
            kds.append(ss.kappa * additive_noise_delta(ss, eps, n, d))
            continue
        probs.append(rep.probability_lower_bound)
        hits += eta <= rep.eta_bound
    elapsed = time.perf_counter() - t0
    if violated:
        ok = False
        detail = (f"bound undefined in {violated}/{trials} trials: kappa*Delta in "
                  f"[{min(kds):.2f}, {max(kds):.2f}] >= 1, so no admissible delta exists")
    else:
        freq, target = hits / trials, min(probs) - 0.05
        ok = freq >= target
        detail = f"containment {freq:.3f} vs required {target:.3f}"
    finish(criterion_log, 3, ok, detail, elapsed, 30)


def test_criterion_4_ridge_containment(criterion_log):
    t0 = time.perf_counter()
    rng = np.random.default_rng(4)
    violations, cases = 0, 0
    for _ in range(100):
        X = rng.uniform(-1, 1, (60, 8))
        y = X @ rng.uniform(-1, 1, 8) + 0.5 * rng.standard_normal(60)
        ss = spectral_summary(validate_dataset(X, y))
        for lam in (0.1, 1.0, 10.0):
            theta = ridge_closed_form(X, y, lam).theta
            ratio = np.linalg.norm(X @ theta - y) / ss.residual_norm
            violations += ratio > ridge_relative_bound(ss.sigma_min, lam, ss.r)
            violations += np.linalg.norm(theta) > ridge_norm_bound(ss.singular_values, lam, ss.fit_norm)
            cases += 1
    elapsed = time.perf_counter() - t0
    finish(criterion_log, 4, violations == 0, f"{violations} violations over {cases} instances", elapsed, 10)


def test_criterion_5_gaussian_tail(criterion_log):
    t0 = time.perf_counter()
    n, d, samples = 100, 20, 500
    rng = np.random.default_rng(5)
    smax = np.array([np.linalg.norm(rng.standard_normal((n, d)), 2) for _ in range(samples)])
    parts, ok = [], True
    for t in (0.5, 1.0, 2.0):
        q = TailQuery(n, d, t)
        bound = gaussian_smax_tail(q)
        count = int(np.sum(smax <= q.threshold))
        # H0: true probability >= bound; reject when the count is improbably low
        p_value = stats.binomtest(count, samples, bound, alternative="less").pvalue if bound > 0 else 1.0
        ok &= p_value >= 0.01
        parts.append(f"t={t}: {count / samples:.3f} vs {bound:.3f} (p={p_value:.2g})")
    elapsed = time.perf_counter() - t0
    finish(criterion_log, 5, ok, "; ".join(parts), elapsed, 60)


def test_criterion_6_noncoherent_dominance(criterion_log):
    t0 = time.perf_counter()
    bad = 0
    for n_prime in range(1, 65):
        for s in (0.1, 1.0, 10.0, 100.0):
            ch = ChannelSpec(n_prime, s, 0.0)
            nc, c = noncoherent_simo_capacity(ch), coherent_simo_capacity(ch)
            bad += not (nc == c if n_prime == 1 else nc > c)
    elapsed = time.perf_counter() - t0
    finish(criterion_log, 6, bad == 0, f"{bad} grid points out of {64 * 4} break the ordering", elapsed, 1)


def test_criterion_7_size_sweep_shape(criterion_log):
    t0 = time.perf_counter()
    recs = sweep_n(100, 0.5, range(1, 6), [ScheduleKind("log", 200)], trials=5, base_seed=0)
    by_n = {}
    for r in recs:
        by_n.setdefault(r.n, {})[r.schedule] = r.eta_mean
    wins = sum(v["log"] < v["none"] for v in by_n.values())
    elapsed = time.perf_counter() - t0
    detail = f"log beats additive noise at {wins}/5 sizes; " + ", ".join(
        f"n={n}: {v['log']:.2f} vs {v['none']:.2f}" for n, v in sorted(by_n.items()))
    finish(criterion_log, 7, wins >= 4, detail, elapsed, 120)


def test_criterion_8_budget_sweep_shape(criterion_log):
    t0 = time.perf_counter()
    grid = [0.1, 0.2, 0.5, 1, 2, 4]
    scheds = [ScheduleKind(s, 200) for s in ("log", "linear", "full")]
    recs = sweep_epsilon(2000, 100, grid, scheds, trials=5, base_seed=0, k=2)
    curves = {}
    for r in recs:
        curves.setdefault(r.schedule, []).append(r)
    problems = []
    for name, curve in curves.items():
        for a, b in zip(curve, curve[1:]):
            pooled = math.sqrt((a.eta_std**2 + b.eta_std**2) / 2)
            if b.eta_mean > a.eta_mean + 2 * pooled:
                problems.append(f"{name} rises from eps={a.epsilon} to {b.epsilon}")
    log_lo, full_lo = curves["log"][0], curves["full"][0]
    log_hi, full_hi = curves["log"][-1], curves["full"][-1]
    if not log_lo.eta_mean < full_lo.eta_mean:
        problems.append("log does not beat full at eps=0.1")
    if full_hi.eta_mean > log_hi.eta_mean + 2 * math.sqrt((full_hi.eta_std**2 + log_hi.eta_std**2) / 2):
        problems.append("full loses to log at eps=4")
    elapsed = time.perf_counter() - t0
    detail = (f"eps=0.1 log {log_lo.eta_mean:.3f} < full {full_lo.eta_mean:.3f}; "
              f"eps=4 full {full_hi.eta_mean:.3f} vs log {log_hi.eta_mean:.3f}")
    if problems:
        detail += "; " + "; ".join(problems)
    finish(criterion_log, 8, not problems, detail, elapsed, 120)


def _digit_csv(path, rng, n=2500, d=300):
    # 0..255 intensities, mostly dark, with class-dependent stroke regions
    labels = rng.choice([4, 9], n)
    stroke = rng.random((2, d)) < 0.3
    mask = np.where((labels == 4)[:, None], stroke[0], stroke[1])
    lit = rng.random((n, d)) < np.where(mask, 0.7, 0.15)
    pix = np.where(lit, rng.integers(1, 256, (n, d)), 0)
    header = ",".join([f"px{j}" for j in range(d)] + ["digit"])
    lines = [",".join(map(str, row)) + f",{lab}" for row, lab in zip(pix.tolist(), labels.tolist())]
    path.write_text(header + "\n" + "\n".join(lines) + "\n")


def test_criterion_9_classification(criterion_log, tmp_path):
    t0 = time.perf_counter()
    ds = generate_blobs(2000, 50, 0)
    an, log = classification_experiment(ds, 0.2, [ScheduleKind("log", 200)], 0.8, 10, 0)
    ok_synth = log.test_error <= an.test_error

    csv_path = tmp_path / "digits_4_9.csv"
    _digit_csv(csv_path, np.random.default_rng(9))
    out = tmp_path / "classify.csv"
    code = main(["classify", "--input-csv", str(csv_path), "--label-col", "digit", "--label-map", "4:1,9:-1",
                 "--max-rows", "2000", "--epsilon", "0.2", "--trials", "3", "--out", str(out)])
    ok_csv = code == 0 and out.exists()
    elapsed = time.perf_counter() - t0
    detail = (f"blobs test error log {log.test_error:.3f} vs additive noise {an.test_error:.3f}; "
              f"digit CSV classify exit code {code}")
    finish(criterion_log, 9, ok_synth and ok_csv, detail, elapsed, 120)


COMMANDS = [
    ["sweep-n", "--d", "5", "--k-max", "2", "--n-per-k", "200", "--base", "50", "--trials", "2"],
    ["sweep-eps", "--epsilon", "0.2,1", "--n", "300", "--d", "5", "--base", "50", "--trials", "2"],
    ["classify", "--n", "400", "--d", "5", "--base", "50", "--trials", "2"],
    ["bounds", "--n", "400", "--d", "5", "--epsilon", "3"],
    ["calibrate", "--epsilon", "0.7", "--n-prime", "10", "--f-sq", "2"],
]


def test_criterion_10_reproducibility(criterion_log, tmp_path):
    t0 = time.perf_counter()

    def body(p):
        return [l for l in p.read_bytes().splitlines() if not l.startswith(b"# timestamp=")]

    mismatched = []
    for argv in COMMANDS:
        a, b = tmp_path / f"{argv[0]}-a.csv", tmp_path / f"{argv[0]}-b.csv"
        codes = main([*argv, "--out", str(a)]), main([*argv, "--out", str(b)])
        if codes != (0, 0) or body(a) != body(b):
            mismatched.append(argv[0])
    elapsed = time.perf_counter() - t0
    detail = f"{len(COMMANDS) - len(mismatched)}/{len(COMMANDS)} subcommands byte-identical apart from the timestamp"
    finish(criterion_log, 10, not mismatched, detail, elapsed, 30)
