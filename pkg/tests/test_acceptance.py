"""Acceptance gate: thirteen numbered checks, each printing one line.

Run with `pytest tests/test_acceptance.py -s` to see the lines as they
pass. Every check pins its tolerance and, where stated, its time budget.
"""

import contextlib
import itertools
import math
import time

import numpy as np
import pytest

from cotypelab import (
    GridFunction,
    KTooLargeError,
    NormTarget,
    TorusDomain,
    VSet,
    adversarial_approx_search,
    adversarial_cancellation_search,
    b_functionals,
    check_lemma_approx,
    check_lemma_cancellation,
    contraction_rhs_bound,
    cotype_functionals,
    diag_distance,
    diag_geodesic_through,
    distortion,
    extract_grid,
    frechet_cycle,
    gamma_exhaustive_two_point,
    gamma_hilbert_exact,
    grid_lower_bound_check,
    grid_points,
    hilbert_gamma_power_iteration,
    linear_exponential_witness,
    mod_inequality_check,
    points_space,
    rad_identity_residual,
    random_two_point_mc,
    random_vector_values,
    sign_patterns,
    sparse_frechet_cycle,
    torus_space,
)
from cotypelab.harmonic import parseval_residual, roundtrip_residual, scale_of


@contextlib.contextmanager
def gate(num, label):
    t0 = time.perf_counter()
    try:
        yield
    except BaseException:
        print(f"[accept] {num:02d} {label}: FAIL")
        raise
    print(f"[accept] {num:02d} {label}: PASS ({time.perf_counter() - t0:.1f}s)")


def test_01_hilbert_exact_values():
    with gate(1, "hilbert-exact-values"):
        t0 = time.perf_counter()
        g14, arg14 = gamma_hilbert_exact(1, 4)
        g24, arg24 = gamma_hilbert_exact(2, 4)
        assert abs(g14 - math.sqrt(3.0) / 4.0) <= 1e-12
        assert abs(g24 - 3.0 / (4.0 * math.sqrt(2.0))) <= 1e-12
        assert abs(hilbert_gamma_power_iteration(1, 4) - g14) <= 1e-9
        assert abs(hilbert_gamma_power_iteration(2, 4) - g24) <= 1e-9
        assert arg14 == (1,)
        assert arg24 == (1, 1)
        assert time.perf_counter() - t0 < 1.0


def test_02_hilbert_ceiling_sweep():
    # every 4-divisible m at least (2/3) pi sqrt(n) stays under sqrt(6)/pi
    with gate(2, "hilbert-ceiling-sweep"):
        t0 = time.perf_counter()
        ceiling = math.sqrt(6.0) / math.pi
        cells = 0
        for n in range(1, 7):
            lo = (2.0 / 3.0) * math.pi * math.sqrt(n)
            for m in range(4, 33, 4):
                if m < lo:
                    continue
                g, _ = gamma_hilbert_exact(n, m)
                assert g <= ceiling + 1e-12, (n, m, g)
                cells += 1
        assert cells == 45
        assert time.perf_counter() - t0 < 60.0


def test_03_projection_identity():
    # 100 random complex witnesses per (n, m) cell
    with gate(3, "projection-identity"):
        t0 = time.perf_counter()
        rng = np.random.default_rng(0)
        for n in (1, 2, 3):
            for m in (4, 6, 8):
                dom = TorusDomain(n=n, m=m)
                for _ in range(100):
                    f = GridFunction.vector(dom, random_vector_values(dom, 2, rng))
                    assert rad_identity_residual(f) < 1e-10 * scale_of(f)
        assert time.perf_counter() - t0 < 60.0


def test_04_transform_consistency():
    with gate(4, "transform-consistency"):
        rng = np.random.default_rng(1)
        count = 0
        for n in (1, 2, 3, 4):
            for m in (4, 6, 8):
                if m ** n > 4096:
                    continue
                dom = TorusDomain(n=n, m=m)
                for _ in range(10):
                    f = GridFunction.vector(dom, random_vector_values(dom, 2, rng))
                    assert parseval_residual(f) < 1e-10
                    assert roundtrip_residual(f) < 1e-10
                    count += 1
        assert count >= 100


def test_05_random_two_point_mean():
    # plugged-in means against n^{1/q} / (m (1 - 3^{-n})^{1/p})
    with gate(5, "random-two-point-mean"):
        out = random_two_point_mc(2, 4, 2.0, 2.0, trials=10**4, seed=0)
        assert abs(out["formula"] - 0.375) <= 1e-15
        assert abs(out["gamma_mc"] - out["formula"]) <= 3.0 * out["stderr"]


def test_06_two_point_monotonicity():
    with gate(6, "two-point-monotonicity"):
        g14 = gamma_exhaustive_two_point(1, 4, 2.0, 2.0).gamma_hat
        g12 = gamma_exhaustive_two_point(1, 2, 2.0, 2.0).gamma_hat
        assert g14 <= g12 + 1e-12
        # padding a k-coordinate witness with n - k inert coordinates keeps
        # lhs and rhs_raw and rescales the weight, so the maximum obeys
        # gamma(k, m) <= (n/k)^{(1 - p/q)/p} gamma(n, m)
        pq = [(1.0, 1.0), (2.0, 2.0), (1.0, 2.0), (2.0, 4.0), (1.0, 4.0)]
        for m, nmax in ((2, 4), (4, 2)):
            for n in range(2, nmax + 1):
                for k in range(1, n):
                    for p, q in pq:
                        gk = gamma_exhaustive_two_point(k, m, p, q).gamma_hat
                        gn = gamma_exhaustive_two_point(n, m, p, q).gamma_hat
                        pad = (n / k) ** ((1.0 - p / q) / p)
                        assert gk <= pad * gn + 1e-12, (m, n, k, p, q)


def test_07_diagonal_shift_invariant():
    with gate(7, "diagonal-shift-invariant"):
        rng = np.random.default_rng(2)
        cells = [(n, m, ell)
                 for n in (1, 2, 3) for m in (4, 6, 8) for ell in (2, 4)]
        per = -(-1000 // len(cells))
        mods = [(0, 2), (1, 0), (0, 0), (2, 2)]
        for n, m, ell in cells:
            dom = TorusDomain(n=n, m=m)
            sp = torus_space(dom)
            for i in range(per):
                f = GridFunction.points(dom, rng.integers(0, sp.size, dom.points))
                rep = b_functionals(f, sp, ell)
                assert rep.b_hat <= 1.0 + 1e-9
                a, r = mods[i % len(mods)]
                assert mod_inequality_check(f, sp, a, r).passed
        for n, m, ell in ((1, 4, 2), (2, 8, 2), (2, 8, 4), (3, 6, 2)):
            dom = TorusDomain(n=n, m=m)
            ident = GridFunction.points(dom, np.arange(dom.points))
            rep = b_functionals(ident, torus_space(dom), ell)
            assert abs(rep.b_hat - 1.0) <= 1e-12


def test_08_smoothing_bounds():
    with gate(8, "smoothing-bounds"):
        t0 = time.perf_counter()
        norm = NormTarget(p=2.0, dim=2)
        rng = np.random.default_rng(3)
        seed = itertools.count(100)
        for n in (1, 2, 3):
            for m in (6, 8, 10):
                for k in (1, 3):
                    if k >= m / 2:
                        # out of the window's domain; the guard must fire
                        dom = TorusDomain(n=n, m=m)
                        f = GridFunction.vector(
                            dom, random_vector_values(dom, 2, rng))
                        with pytest.raises(KTooLargeError):
                            check_lemma_approx(f, norm, 0, k, 2.0)
                        continue
                    dom = TorusDomain(n=n, m=m)
                    pats = sign_patterns(n)
                    for i in range(500):
                        f = GridFunction.vector(
                            dom, random_vector_values(dom, 2, rng))
                        j = i % n
                        eps = pats[i % len(pats)]
                        for p in (1.0, 2.0):
                            assert check_lemma_approx(f, norm, j, k, p).passed
                            assert check_lemma_cancellation(
                                f, norm, k, p, eps).passed
                    for p in (1.0, 2.0):
                        a = adversarial_approx_search(
                            n, m, 0, k, p, norm, steps=50, seed=next(seed))
                        assert a.passed
                        c = adversarial_cancellation_search(
                            n, m, k, p, np.ones(n, dtype=np.int64), norm,
                            steps=50, seed=next(seed))
                        assert c.passed
        assert time.perf_counter() - t0 < 600.0


def test_09_cycle_embeddings():
    with gate(9, "cycle-embeddings"):
        for m in range(1, 17):
            assert frechet_cycle(m).distortion == 1.0
        for m in range(1, 65):
            for eps in (0.5, 0.25, 0.125):
                emb = sparse_frechet_cycle(m, eps)
                assert emb.distortion <= 1.0 + 6.0 * eps, (m, eps)


def test_10_grid_identity_distortion():
    with gate(10, "grid-identity-distortion"):
        for n in range(1, 6):
            for q in (2.0, 4.0):
                for m in (2, 4):
                    pts = grid_points(n, m)
                    d = distortion(np.arange(len(pts)),
                                   points_space(pts, math.inf),
                                   points_space(pts, q))
                    expected = n ** (1.0 / q)
                    assert abs(d.distortion - expected) <= 1e-12 * expected


def test_11_grid_injection_floor():
    with gate(11, "grid-injection-floor"):
        t0 = time.perf_counter()
        chk = grid_lower_bound_check(2, 4, 3, trials=100, seed=4,
                                     adversarial_steps=20)
        assert chk.passed
        assert abs(chk.lhs - 4.0 / 3.0) <= 1e-12
        assert time.perf_counter() - t0 < 60.0


def test_12_grid_extraction():
    with gate(12, "grid-extraction"):
        for n in (1, 2):
            for m in (8, 16):
                dom = TorusDomain(n=n, m=m)
                ident = GridFunction.points(dom, np.arange(dom.points))
                rec, _ = extract_grid(ident, torus_space(dom), m // 2)
                assert rec.distortion <= 1.0 + 1e-9
        for n in (1, 2):
            for s in (4, 8):
                dom = TorusDomain(n=n, m=2 * s)
                members = VSet.of(s, n).members
                for x in members:
                    for y in members:
                        path = diag_geodesic_through(np.asarray(x),
                                                     np.asarray(y), s, dom)
                        assert path.length == s
                        assert path.through_index == diag_distance(
                            dom, np.asarray(x), np.asarray(y))
                        steps = path.steps.astype(np.int64)
                        diffs = (steps[1:] - steps[:-1]) % dom.m
                        assert np.all((diffs == 1) | (diffs == dom.m - 1))


def test_13_exponential_witness():
    with gate(13, "exponential-witness"):
        for n in (1, 2, 3):
            for m in (4, 8, 16):
                for p in (1.0, 2.0):
                    vecs = np.eye(n)
                    f = linear_exponential_witness(vecs, m)
                    tgt = NormTarget(p=2.0, dim=n)
                    rep = cotype_functionals(f, tgt, p=p, q=2.0)
                    lhs = (2.0 ** p) * n  # each basis vector has norm one
                    assert abs(rep.lhs - lhs) <= 1e-12 * lhs
                    bound = contraction_rhs_bound(vecs, m, p, tgt)
                    assert rep.rhs_raw <= bound + 1e-12
