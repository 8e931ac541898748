"""Acceptance criteria, one pass/fail line each.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines inline;
they are also collected into the terminal summary.
"""

import math
import time
from fractions import Fraction

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from test_eigen_families import h_oracle
from wsemigroup.cli import parse_and_dispatch
from wsemigroup.dynamics_lab import (PeriodicPointSpec, detect_period, expansivity_witness,
                                     span_gram, spectral_radius_probe)
from wsemigroup.eigen_families import h_inner_coeffs, make_f, make_g, make_h, make_kappa
from wsemigroup.hardy_core import inner_product, lin_comb, monomial, norm, polynomial
from wsemigroup.rh_lab import orbit_residual_profile, rh_distance_sweep
from wsemigroup.semigroup import FORWARD, OperatorSpec, apply_iterate, apply_W, apply_W_star


def record(tag, ok, detail, elapsed=None, limit=None):
    if limit is not None:
        ok = ok and elapsed < limit
        detail += f"; {elapsed:.2f}s (limit {limit}s)"
    line = f"[{'PASS' if ok else 'FAIL'}] {tag}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def unit_poly(rng, degree):
    c = rng.standard_normal(degree + 1) + 1j * rng.standard_normal(degree + 1)
    return polynomial(c / np.linalg.norm(c))


def test_ac1_exact_identities():
    t0 = time.perf_counter()
    rng = np.random.default_rng(1)
    worst = 0.0
    for _ in range(100):
        n = int(rng.integers(2, 11))
        m = int(rng.integers(2, 11))
        f, g = (unit_poly(rng, int(rng.integers(0, 201))) for _ in range(2))
        Wf = apply_W(n, f)
        errs = [
            np.max(np.abs(apply_W_star(n, Wf).trusted() - n * f.trusted())),
            abs(norm(Wf).value ** 2 - n * norm(f).value ** 2),
            abs(inner_product(Wf, g).value - inner_product(f, apply_W_star(n, g)).value),
            np.max(np.abs(apply_W(m, Wf).trusted() - apply_W(m * n, f).trusted())),
        ]
        worst = max(worst, max(errs))
    record("AC1 exact identities", worst <= 1e-12, f"max abs error {worst:.2e} on unit inputs (tol 1e-12)",
           time.perf_counter() - t0, 10)


def test_ac2_fixed_point_non_normality():
    one = monomial(0)
    fixed = all(np.array_equal(apply_W_star(k, one).trusted(), [1]) for k in range(1, 11))
    gaps, exact = [], True
    for k in range(2, 11):
        a = apply_W(k, apply_W_star(k, one))
        exact &= a.exact and np.array_equal(a.trusted(), np.ones(k))
        gaps.append(norm(lin_comb([(1, a), (-1, apply_W_star(k, apply_W(k, one)))])).value)
    ok = fixed and exact and min(gaps) > 0
    record("AC2 fixed point / non-normality", ok,
           f"W_k*1=1 for k<=10: {fixed}; W_kW_k*1 = 1+..+z^(k-1) exact: {exact}; "
           f"min commutator norm {min(gaps):.3f}")


def test_ac3_eigenrelations():
    t0 = time.perf_counter()
    D = 10**4
    worst_ratio = 0.0
    for k in (1, 2, 3):
        f = make_f(k, D)
        for n in (2, 3, 5):
            r = lin_comb([(1, apply_W_star(n, f)), (-(n ** -k), f)])
            worst_ratio = max(worst_ratio, norm(r).value / r.tail_bound)
    worst_rel = 0.0
    for s in (0.75 + 3j, 1 + 2j):
        kap = make_kappa(s, 10**5)
        for n in (2, 3, 5):
            r = lin_comb([(1, apply_W_star(n, kap)), (-(n ** (1 - s.conjugate())), kap)])
            worst_rel = max(worst_rel, norm(r).value / norm(kap).value)
    ok = worst_ratio <= 10 and worst_rel <= 1e-2
    record("AC3 eigenrelations", ok,
           f"f residual / tail max {worst_ratio:.2e} (<= 10); kappa rel residual max {worst_rel:.2e} (<= 1e-2)",
           time.perf_counter() - t0, 60)


def test_ac4_periodic_points():
    t0 = time.perf_counter()
    cases = [(2, Fraction(1), 2), (2, Fraction(1, 2), 4), (3, Fraction(2), 1), (3, Fraction(2, 3), 3)]
    got = []
    for n, alpha, want in cases:
        spec = PeriodicPointSpec(n, alpha)
        det = detect_period(spec, 10**6, 1e-2)
        got.append((n, str(alpha), want, spec.predicted_period, det.period))
    ok = all(w == p == d for _, _, w, p, d in got)
    detail = ", ".join(f"({n},{a})->{d}" for n, a, _, _, d in got)
    record("AC4 periodic points", ok, f"detected {detail}", time.perf_counter() - t0, 120)


def test_ac5_expansivity():
    rng = np.random.default_rng(5)
    worst = 0.0
    witness_ok = True
    for k in (2, 3, 4):
        f = polynomial(rng.standard_normal(30) + 1j * rng.standard_normal(30))
        base = norm(f).value
        for m in range(1, 7):
            v = norm(apply_iterate(OperatorSpec(FORWARD, k), m, f, method="loop")).value
            worst = max(worst, abs(v - k ** (m / 2) * base) / (k ** (m / 2) * base))
        # log2 keeps k = 4 exact
        witness_ok &= expansivity_witness(k) == math.ceil(2 / math.log2(k))
    record("AC5 expansivity", worst <= 1e-12 and witness_ok,
           f"max rel error {worst:.2e} (tol 1e-12); witness matches ceil(2 log2/log k): {witness_ok}")


def test_ac6_spectral_radius():
    errs = {n: abs(spectral_radius_probe(n, 5)[-1] - math.sqrt(n)) for n in (2, 4, 9)}
    record("AC6 spectral radius probe", max(errs.values()) <= 1e-3,
           "; ".join(f"n={n} err {e:.1e}" for n, e in errs.items()) + " (tol 1e-3)")


def test_ac7_gram_full_rank():
    D = 10**4
    T = 2 * math.pi / math.log(2)
    families = {
        "f1..f6": [make_f(k, D) for k in range(1, 7)],
        "g1..g6": [make_g(k, D) for k in range(1, 7)],
        "kappa Re=0.75": [make_kappa(0.75 + 1j * t, D) for t in np.linspace(0.5, 4, 5)],
        "kappa 1+it": [make_kappa(1 + 1j * t, D) for t in np.linspace(0, T, 7)[1:-1]],
    }
    parts, ok = [], True
    for name, vecs in families.items():
        rep = span_gram(vecs)
        ok &= rep.full_rank and rep.min_eigenvalue > 0
        parts.append(f"{name} min eig {rep.min_eigenvalue:.2e} rank {rep.effective_rank}/{rep.dimension}")
    record("AC7 Gram full rank", ok, "; ".join(parts))


def test_ac8_rh_sweep():
    t0 = time.perf_counter()
    sweep = rh_distance_sweep(20, 10**4)
    positive = all(d > 0 for d in sweep.distances)
    h20 = make_h(2, 10).coeffs[0]
    const_err = abs(h20 - (-math.log(2)))
    oracle_err = 0.0
    for k in (2, 3, 5):
        q, h = h_oracle(k, 500)
        oracle_err = max(oracle_err, np.max(np.abs(h_inner_coeffs(k, 500) - q)),
                         np.max(np.abs(make_h(k, 500).trusted() - h)))
    ok = (positive and sweep.monotone and sweep.max_oracle_gap <= 1e-8
          and const_err <= 1e-12 and oracle_err <= 1e-10)
    record("AC8 RH sweep integrity", ok,
           f"d_2={sweep.distances[0]:.5f} d_20={sweep.distances[-1]:.5f} positive={positive} "
           f"monotone={sweep.monotone}; solver gap {sweep.max_oracle_gap:.1e} (<= 1e-8); "
           f"h_2(0) err {const_err:.1e}; log-recurrence err {oracle_err:.1e}",
           time.perf_counter() - t0, 300)


def test_ac9_orbit_residual_fixed_point():
    D, K = 10**4, 20
    dK = rh_distance_sweep(K, D).distances[-1]
    worst = 0.0
    for n in (2, 3, 5):
        prof = orbit_residual_profile(n, monomial(0), 10, K, D, start="1")
        assert len(prof.residuals) == 11
        worst = max(worst, max(abs(r - dK) for r in prof.residuals))
    record("AC9 orbit residual fixed point", worst <= 1e-10, f"max |r_m - d_K| {worst:.1e} (tol 1e-10)")


@pytest.mark.parametrize("argv", [
    ["rh-sweep", "--kmax", 12, "--degree", 5000],
    ["period", "--n", 3, "--alpha-p", 2, "--alpha-q", 3, "--degree", 20000],
    ["expansive", "--k", 3, "--trials", 4, "--degree", 50, "--seed", 17],
    ["gram", "--family", "kappa", "--s-re", 1.0, "--count", 5, "--degree", 2000, "--format", "csv"],
])
def test_ac10_reproducibility(tmp_path, argv):
    paths = [tmp_path / f"run{i}" for i in range(2)]
    codes = [parse_and_dispatch([str(a) for a in argv] + ["--out", str(p)]) for p in paths]
    same = paths[0].read_bytes() == paths[1].read_bytes()
    meta = [p.with_name(p.name + ".meta.json") for p in paths]
    if meta[0].exists():
        same &= meta[0].read_bytes() == meta[1].read_bytes()
    record(f"AC10 reproducibility [{argv[0]}]", codes == [0, 0] and same,
           f"exit codes {codes}; byte-identical: {same}")
