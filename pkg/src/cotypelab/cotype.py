"""Cotype functionals on the discrete torus and their extremal searches.

The central quantity: for f on Z_m^n with values in a metric space,

    lhs(f)     = sum_j avg_x d(f(x + (m/2) e_j), f(x))^p
    rhs_raw(f) = avg over eps in {-1,0,1}^n of avg_x d(f(x+eps), f(x))^p
    gamma_hat  = ( lhs / (m^p * n^(1-p/q) * rhs_raw) )^(1/p)

The companion diagonal-shift quantity replaces the half-circumference
shift by an even shift ell and averages edges over full sign patterns:

    b_hat = sqrt( sum_j avg_x d(f(x + ell e_j), f(x))^2
                  / (ell^2 * n * avg_{eps in {-1,1}^n} avg_x d(f(x+eps), f(x))^2) )

Every witness satisfies b_hat <= 1 (up to round-off); the code treats a
violation as a defect, not as data.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from math import comb

import numpy as np

from .checks import InequalityCheck, make_check
from .errors import (
    BudgetExceededError,
    InvariantViolationError,
    NotFoundError,
    OddEllError,
    OddMError,
    PreconditionViolationError,
)
from .gridops import (
    axis_shift,
    random_point_values,
    roll_values,
    sign_patterns,
    three_patterns,
)
from .harmonic import GridFunction
from .spaces import FiniteMetricSpace, TorusDomain, two_point_space
from .targets import MetricTarget, NormTarget, as_target as _as_target

EPS_ENUM_BUDGET = 1 << 22  # exact eps enumeration while 3^n * m^n stays below
TWO_POINT_BUDGET = 1 << 20
B_INVARIANT_TOL = 1e-9


def _mean_dp(f: GridFunction, target, shift, p: float) -> float:
    """avg_x d(f(x + shift), f(x))^p."""
    shifted = roll_values(f.domain, f.values, shift)
    d = target.pairwise(shifted, f.values)
    return float(np.mean(d ** p)) if p != 1 else float(np.mean(d))


@dataclass(frozen=True)
class CotypeReport:
    n: int
    m: int
    p: float
    q: float
    lhs: float
    rhs_raw: float
    gamma_hat: float
    degenerate: bool
    mode: str  # "exact" or "sampled"
    stderr: float = 0.0  # of rhs_raw, sampled mode only
    seed: int | None = None
    budget: int | None = None
    witness: GridFunction | None = None

    def to_json_dict(self) -> dict:
        out = {
            "n": self.n, "m": self.m, "p": self.p, "q": self.q,
            "lhs": self.lhs, "rhs_raw": self.rhs_raw,
            "gamma_hat": self.gamma_hat, "degenerate": self.degenerate,
            "mode": self.mode, "stderr": self.stderr,
        }
        if self.seed is not None:
            out["seed"] = self.seed
        if self.budget is not None:
            out["budget"] = self.budget
        if self.witness is not None and not self.witness.is_vector:
            out["witness"] = [int(v) for v in self.witness.values]
        return out


def _gamma_from(lhs: float, rhs_raw: float, n: int, m: int,
                p: float, q: float) -> tuple[float, bool]:
    if rhs_raw <= 0.0:
        return 0.0, True
    weight = m**p * n ** (1.0 - p / q)
    return (lhs / (weight * rhs_raw)) ** (1.0 / p), False


def _check_pq(p: float, q: float) -> None:
    if p < 1:
        raise PreconditionViolationError(f"p must be >= 1, got {p}")
    if p > q:
        raise PreconditionViolationError(
            f"the weak functional needs p <= q, got p={p} q={q}"
        )


def cotype_functionals(f: GridFunction, space_or_norm, p: float, q: float,
                       budget: int = EPS_ENUM_BUDGET,
                       seed: int = 0) -> CotypeReport:
    """Evaluate lhs, rhs_raw, and gamma_hat for one witness.

    The eps average is exact while 3^n * m^n <= budget; beyond that it is
    estimated by stratified sampling over the number of zero entries of
    eps (the x average stays exact), with the standard error reported.
    """
    _check_pq(p, q)
    dom = f.domain
    n, m = dom.n, dom.m
    if m % 2 != 0:
        raise OddMError(f"half-circumference shift needs even m, got {m}")
    target = _as_target(space_or_norm)

    lhs = 0.0
    for j in range(n):
        lhs += _mean_dp(f, target, axis_shift(dom, j, m // 2), p)

    exact = 3**n * dom.points <= budget
    if exact:
        total = 0.0
        for eps in three_patterns(n):
            if np.any(eps):
                total += _mean_dp(f, target, eps, p)
        rhs_raw = total / 3**n
        stderr = 0.0
        mode = "exact"
    else:
        rng = np.random.default_rng(seed)
        n_samples = max(n, int(budget // max(dom.points, 1)))
        rhs_raw, stderr = _sampled_eps_average(f, target, p, n_samples, rng)
        mode = "sampled"

    gamma_hat, degenerate = _gamma_from(lhs, rhs_raw, n, m, p, q)
    return CotypeReport(
        n=n, m=m, p=p, q=q, lhs=lhs, rhs_raw=rhs_raw, gamma_hat=gamma_hat,
        degenerate=degenerate, mode=mode, stderr=stderr,
        seed=None if exact else seed, budget=budget,
    )


def _sampled_eps_average(f: GridFunction, target, p: float,
                         n_samples: int, rng) -> tuple[float, float]:
    """Stratified estimate of the {-1,0,1}^n edge average.

    Strata are indexed by the number z of zero entries; the all-zero
    stratum contributes exactly 0. Returns (estimate, standard error).
    """
    n = f.domain.n
    weights = [comb(n, z) * 2 ** (n - z) / 3**n for z in range(n)]
    wsum = sum(weights)
    alloc = [max(1, round(n_samples * w / wsum)) for w in weights]
    est = 0.0
    var = 0.0
    for z, (w, k) in enumerate(zip(weights, alloc)):
        vals = np.empty(k)
        for i in range(k):
            eps = np.zeros(n, dtype=np.int64)
            nonzero = rng.choice(n, size=n - z, replace=False)
            eps[nonzero] = rng.choice((-1, 1), size=n - z)
            vals[i] = _mean_dp(f, target, eps, p)
        est += w * float(vals.mean())
        if k > 1:
            var += w**2 * float(vals.var(ddof=1)) / k
    return est, math.sqrt(var)


def gamma_hilbert_exact(n: int, m: int) -> tuple[float, tuple]:
    """Exact p=q=2 constant for maps into Hilbert space, with its maximizer.

    Both quadratic forms are diagonal in the character basis, so the
    constant is max over frequencies k != 0 of

        sqrt( 4 * #{j : k_j odd} / (m^2 * D(k)) ),
        D(k) = 2 - 2 * prod_j (1 + 2 cos(2 pi k_j / m)) / 3.

    The quotient is invariant under coordinate permutations and under
    k_j -> m - k_j, so the search runs over multisets of folded residues
    in [0, m/2]; the reported maximizer is the sorted representative.
    """
    if n < 1:
        raise PreconditionViolationError(f"n must be >= 1, got {n}")
    if m % 2 != 0:
        raise OddMError(f"even m required, got {m}")
    half = m // 2
    factors = [(1.0 + 2.0 * math.cos(2.0 * math.pi * r / m)) / 3.0
               for r in range(half + 1)]
    odd_flags = [r % 2 for r in range(half + 1)]
    best = -1.0
    best_k: tuple = ()
    for combo in itertools.combinations_with_replacement(range(half + 1), n):
        odd = 0
        prod = 1.0
        for r in combo:
            odd += odd_flags[r]
            prod *= factors[r]
        if odd == 0:
            continue  # numerator vanishes (covers the excluded k = 0 too)
        dk = 2.0 - 2.0 * prod
        ratio = 4.0 * odd / (m * m * dk)
        if ratio > best:
            best = ratio
            best_k = combo
    return math.sqrt(best), best_k


def _shift_permutation(dom: TorusDomain, shift) -> np.ndarray:
    """perm with perm[x] = linear index of x + shift."""
    idx = np.arange(dom.points, dtype=np.int64)
    return roll_values(dom, idx, shift)


def hilbert_gamma_power_iteration(n: int, m: int, iters: int = 300,
                                  seed: int = 7) -> float:
    """Independent oracle for gamma_hilbert_exact via dense quadratic forms.

    Assembles both forms as symmetric matrices from shift permutations,
    whitens the edge form by its eigendecomposition (constants are its
    kernel and get deflated), and power-iterates the whitened matrix.
    """
    if m % 2 != 0:
        raise OddMError(f"even m required, got {m}")
    dom = TorusDomain(n=n, m=m)
    N = dom.points
    if N > 4096:
        raise BudgetExceededError(f"dense oracle capped at 4096 points, got {N}")
    eye = np.eye(N)
    A = np.zeros((N, N))
    for j in range(n):
        S = eye[_shift_permutation(dom, axis_shift(dom, j, m // 2))]
        D = S - eye
        A += D.T @ D
    B = np.zeros((N, N))
    pats = three_patterns(n)
    for eps in pats:
        S = eye[_shift_permutation(dom, eps)]
        D = S - eye
        B += D.T @ D
    B /= len(pats)

    w, Q = np.linalg.eigh(B)
    keep = w > 1e-12 * w.max()
    W = Q[:, keep] / np.sqrt(w[keep])
    M = W.T @ A @ W
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(M.shape[0])
    v /= np.linalg.norm(v)
    lam = 0.0
    for _ in range(iters):
        v = M @ v
        nv = np.linalg.norm(v)
        if nv == 0:
            return 0.0
        v /= nv
        lam = float(v @ M @ v)
    return math.sqrt(lam) / m


def _bit_table(count: int, width: int) -> np.ndarray:
    idx = np.arange(count, dtype=np.int64)
    return ((idx[:, None] >> np.arange(width)[None, :]) & 1).astype(np.uint8)


def gamma_exhaustive_two_point(n: int, m: int, p: float, q: float,
                               budget: int = TWO_POINT_BUDGET) -> CotypeReport:
    """Maximize gamma_hat over every map into the two-point space.

    Enumerates all 2^(m^n) value tables (m^n <= 20). Distances into the
    canonical two-point space are 0/1, so d^p is the xor of bit tables
    and gamma_hat is scale-invariant in the two-point gap.
    """
    _check_pq(p, q)
    dom = TorusDomain(n=n, m=m)
    if m % 2 != 0:
        raise OddMError(f"even m required, got {m}")
    N = dom.points
    if N > 20:
        raise PreconditionViolationError(f"exhaustive scan needs m^n <= 20, got {N}")
    if 2**N > budget:
        raise BudgetExceededError(f"2^{N} witnesses exceed budget {budget}")
    bits = _bit_table(2**N, N)

    lhs = np.zeros(2**N)
    for j in range(n):
        perm = _shift_permutation(dom, axis_shift(dom, j, m // 2))
        lhs += (bits ^ bits[:, perm]).mean(axis=1)
    rhs = np.zeros(2**N)
    pats = three_patterns(n)
    for eps in pats:
        if not np.any(eps):
            continue
        perm = _shift_permutation(dom, eps)
        rhs += (bits ^ bits[:, perm]).mean(axis=1)
    rhs /= len(pats)

    weight = m**p * n ** (1.0 - p / q)
    with np.errstate(divide="ignore", invalid="ignore"):
        gammas = np.where(rhs > 0, (lhs / (weight * rhs)) ** (1.0 / p), 0.0)
    best = int(np.argmax(gammas))  # first index wins ties
    witness = GridFunction.points(dom, bits[best].astype(np.int64))
    return CotypeReport(
        n=n, m=m, p=p, q=q, lhs=float(lhs[best]), rhs_raw=float(rhs[best]),
        gamma_hat=float(gammas[best]), degenerate=bool(rhs[best] <= 0),
        mode="exact", witness=witness,
    )


def expected_random_gamma(n: int, m: int, p: float, q: float) -> float:
    """Ratio-of-expectations gamma for a uniformly random two-point witness.

    Both sides of the defining inequality average d^p = 1/2 per distinct
    pair, and the eps = 0 atom has weight 3^(-n), leaving
    n^(1/q) / (m * (1 - 3^(-n))^(1/p)).
    """
    _check_pq(p, q)
    if m % 2 != 0:
        raise OddMError(f"even m required, got {m}")
    return n ** (1.0 / q) / (m * (1.0 - 3.0 ** (-n)) ** (1.0 / p))


def random_two_point_mc(n: int, m: int, p: float, q: float, trials: int,
                        seed: int, chunk: int = 4096) -> dict:
    """Monte-Carlo comparison of random two-point witnesses with the formula.

    Estimates E[lhs] and E[rhs_raw] over uniformly random witnesses, plugs
    the means into the gamma formula (delta-method standard error), and
    also reports the mean of the per-witness gamma_hat values for contrast.
    """
    _check_pq(p, q)
    dom = TorusDomain(n=n, m=m)
    if m % 2 != 0:
        raise OddMError(f"even m required, got {m}")
    N = dom.points
    rng = np.random.default_rng(seed)
    half_perms = [_shift_permutation(dom, axis_shift(dom, j, m // 2))
                  for j in range(n)]
    eps_perms = [_shift_permutation(dom, eps) for eps in three_patterns(n)
                 if np.any(eps)]
    L = np.empty(trials)
    R = np.empty(trials)
    done = 0
    while done < trials:
        k = min(chunk, trials - done)
        bits = rng.integers(0, 2, size=(k, N), dtype=np.int64).astype(np.uint8)
        lhs = np.zeros(k)
        for perm in half_perms:
            lhs += (bits ^ bits[:, perm]).mean(axis=1)
        rhs = np.zeros(k)
        for perm in eps_perms:
            rhs += (bits ^ bits[:, perm]).mean(axis=1)
        rhs /= 3**n
        L[done:done + k] = lhs
        R[done:done + k] = rhs
        done += k

    weight = m**p * n ** (1.0 - p / q)
    Lbar, Rbar = float(L.mean()), float(R.mean())
    gamma_mc = (Lbar / (weight * Rbar)) ** (1.0 / p)
    # delta method for g(L, R) = (L / (w R))^(1/p)
    vL = float(L.var(ddof=1)) / trials
    vR = float(R.var(ddof=1)) / trials
    cLR = float(np.cov(L, R, ddof=1)[0, 1]) / trials
    rel = vL / Lbar**2 + vR / Rbar**2 - 2.0 * cLR / (Lbar * Rbar)
    se = gamma_mc / p * math.sqrt(max(rel, 0.0))

    with np.errstate(divide="ignore", invalid="ignore"):
        gs = np.where(R > 0, (L / (weight * R)) ** (1.0 / p), 0.0)
    return {
        "gamma_mc": gamma_mc,
        "stderr": se,
        "formula": expected_random_gamma(n, m, p, q),
        "mean_of_gammas": float(gs.mean()),
        "mean_of_gammas_stderr": float(gs.std(ddof=1) / math.sqrt(trials)),
        "trials": trials,
        "seed": seed,
        "degenerate_count": int((R <= 0).sum()),
    }


@dataclass(frozen=True)
class BReport:
    n: int
    m: int
    ell: int
    lhs: float
    rhs_raw: float
    b_hat: float
    degenerate: bool
    mode: str = "exact"
    seed: int | None = None
    budget: int | None = None
    witness: GridFunction | None = None

    def to_json_dict(self) -> dict:
        out = {
            "n": self.n, "m": self.m, "ell": self.ell, "lhs": self.lhs,
            "rhs_raw": self.rhs_raw, "b_hat": self.b_hat,
            "degenerate": self.degenerate, "mode": self.mode,
        }
        if self.seed is not None:
            out["seed"] = self.seed
        if self.budget is not None:
            out["budget"] = self.budget
        if self.witness is not None and not self.witness.is_vector:
            out["witness"] = [int(v) for v in self.witness.values]
        return out


def b_functionals(f: GridFunction, space_or_norm, ell: int,
                  enforce: bool = True) -> BReport:
    """Evaluate the diagonal-shift quantity for one witness (p = 2).

    Every witness satisfies b_hat <= 1; with enforce=True a numerical
    violation beyond 1e-9 raises InvariantViolationError.
    """
    dom = f.domain
    n, m = dom.n, dom.m
    if m % 2 != 0:
        raise OddMError(f"even m required, got {m}")
    if ell % 2 != 0:
        raise OddEllError(f"even shift required, got ell={ell}")
    target = _as_target(space_or_norm)
    lhs = 0.0
    for j in range(n):
        lhs += _mean_dp(f, target, axis_shift(dom, j, ell), 2.0)
    pats = sign_patterns(n)
    rhs_raw = 0.0
    for eps in pats:
        rhs_raw += _mean_dp(f, target, eps, 2.0)
    rhs_raw /= len(pats)
    if rhs_raw <= 0.0:
        return BReport(n=n, m=m, ell=ell, lhs=lhs, rhs_raw=0.0, b_hat=0.0,
                       degenerate=True)
    b_hat = math.sqrt(lhs / (ell**2 * n * rhs_raw))
    if enforce and b_hat > 1.0 + B_INVARIANT_TOL:
        raise InvariantViolationError(
            f"b_hat = {b_hat} exceeds 1 beyond tolerance at n={n} m={m} ell={ell}"
        )
    return BReport(n=n, m=m, ell=ell, lhs=lhs, rhs_raw=rhs_raw, b_hat=b_hat,
                   degenerate=False)


def _hill_climb(dom: TorusDomain, codomain_size: int, evaluate, budget: int,
                seed: int, initial_values=()):
    """Shared single-point-reassignment climber.

    evaluate(values) -> (score, report). Strict improvement only; number
    of restarts is budget / m^n rounded up; provided starting witnesses
    occupy the leading restarts; constant random starts are resampled.
    Returns the best report across restarts (earliest wins ties).
    """
    N = dom.points
    per_restart = max(2, N)
    restarts = max(1, math.ceil(budget / per_restart))
    seeds = np.random.SeedSequence(seed).spawn(restarts)
    best_score = -math.inf
    best_report = None
    evals = 0
    initial = list(initial_values)
    for ri in range(restarts):
        if evals >= budget:
            break
        rng = np.random.default_rng(seeds[ri])
        if ri < len(initial):
            vals = np.asarray(initial[ri], dtype=np.int64).copy()
        else:
            vals = random_point_values(dom, codomain_size, rng)
            while codomain_size > 1 and N > 1 and np.all(vals == vals[0]):
                vals = random_point_values(dom, codomain_size, rng)
        score, report = evaluate(vals)
        evals += 1
        budget_here = min(per_restart - 1, budget - evals)
        for _ in range(budget_here):
            x = int(rng.integers(N))
            old = vals[x]
            delta = int(rng.integers(1, codomain_size)) if codomain_size > 1 else 0
            vals[x] = (old + delta) % codomain_size
            new_score, new_report = evaluate(vals)
            evals += 1
            if new_score > score:
                score, report = new_score, new_report
            else:
                vals[x] = old
        if score > best_score:
            best_score = score
            best_report = report
    return best_report, evals


def gamma_search(space: FiniteMetricSpace, n: int, m: int, p: float, q: float,
                 budget: int, seed: int,
                 initial_witnesses=()) -> CotypeReport:
    """Hill-climb gamma_hat over maps Z_m^n -> space.

    Reported value is a lower bound on the true supremum. Caller-supplied
    witnesses (value tables) join the restart pool, so the result is
    always >= their evaluated gamma_hat.
    """
    _check_pq(p, q)
    dom = TorusDomain(n=n, m=m)
    target = MetricTarget(space)

    def evaluate(vals):
        f = GridFunction.points(dom, vals)
        rep = cotype_functionals(f, space, p, q)
        rep = CotypeReport(
            n=rep.n, m=rep.m, p=rep.p, q=rep.q, lhs=rep.lhs,
            rhs_raw=rep.rhs_raw, gamma_hat=rep.gamma_hat,
            degenerate=rep.degenerate, mode=rep.mode, stderr=rep.stderr,
            seed=seed, budget=budget,
            witness=GridFunction.points(dom, vals.copy()),
        )
        score = -math.inf if rep.degenerate else rep.gamma_hat
        return score, rep

    best, _ = _hill_climb(dom, space.size, evaluate, budget, seed,
                          initial_witnesses)
    return best


def b_quantity_search(space: FiniteMetricSpace, n: int, ell: int, m: int,
                      budget: int, seed: int,
                      initial_witnesses=()) -> BReport:
    """Hill-climb b_hat over maps Z_m^n -> space; result stays <= 1."""
    dom = TorusDomain(n=n, m=m)

    def evaluate(vals):
        f = GridFunction.points(dom, vals)
        rep = b_functionals(f, space, ell)
        rep = BReport(
            n=rep.n, m=rep.m, ell=rep.ell, lhs=rep.lhs, rhs_raw=rep.rhs_raw,
            b_hat=rep.b_hat, degenerate=rep.degenerate, mode="exact",
            seed=seed, budget=budget,
            witness=GridFunction.points(dom, vals.copy()),
        )
        score = -math.inf if rep.degenerate else rep.b_hat
        return score, rep

    best, _ = _hill_climb(dom, space.size, evaluate, budget, seed,
                          initial_witnesses)
    return best


def mod_inequality_check(f: GridFunction, space_or_norm, a: int,
                         r: int) -> InequalityCheck:
    """Shift-by-(a m + r) comparison against min(r^2, (m-r)^2) edge energy.

    Requires even m and even r with 0 <= r < m; odd r admits genuine
    counterexamples, e.g. parity of x_1 - x_2 on Z_4^2.
    """
    dom = f.domain
    n, m = dom.n, dom.m
    if m % 2 != 0:
        raise OddMError(f"even m required, got {m}")
    if r % 2 != 0:
        raise PreconditionViolationError(f"even r required, got r={r}")
    if not 0 <= r < m:
        raise PreconditionViolationError(f"need 0 <= r < m, got r={r} m={m}")
    if a < 0:
        raise PreconditionViolationError(f"need a >= 0, got a={a}")
    target = _as_target(space_or_norm)
    shift = a * m + r
    lhs = 0.0
    for j in range(n):
        lhs += _mean_dp(f, target, axis_shift(dom, j, shift), 2.0)
    pats = sign_patterns(n)
    edge = sum(_mean_dp(f, target, eps, 2.0) for eps in pats) / len(pats)
    rhs = min(r**2, (m - r) ** 2) * n * edge
    return make_check(
        "shift-mod-bound",
        {"n": n, "m": m, "a": a, "r": r},
        lhs,
        rhs,
    )


def edge_sum_check(f: GridFunction, space_or_norm,
                   p: float) -> InequalityCheck:
    """Per-coordinate edge sum against 3 * 2^(p-1) * n times the eps average.

    The eps average runs over the full three-letter measure, zero
    pattern included, exactly as in the cotype denominator.
    """
    dom = f.domain
    n = dom.n
    if p < 1:
        raise PreconditionViolationError(f"p must be >= 1, got {p}")
    target = _as_target(space_or_norm)
    lhs = 0.0
    for j in range(n):
        lhs += _mean_dp(f, target, axis_shift(dom, j, 1), p)
    total = 0.0
    for eps in three_patterns(n):
        total += _mean_dp(f, target, eps, p)
    rhs = 3.0 * 2.0 ** (p - 1.0) * n * (total / 3**n)
    return make_check("edge-sum-bound", {"n": n, "m": dom.m, "p": p}, lhs, rhs)


def contraction_principle_check(vectors, scalars, p: float,
                                norm: NormTarget) -> InequalityCheck:
    """E_eps ||sum_j eps_j a_j x_j||^p <= E_eps ||sum_j eps_j x_j||^p, |a_j| <= 1.

    Both sides by exact enumeration over the 2^n sign patterns.
    """
    X = np.asarray(vectors, dtype=np.complex128)
    a = np.asarray(scalars, dtype=np.float64)
    if X.ndim != 2 or a.shape != (X.shape[0],):
        raise PreconditionViolationError(
            "need an (n, d) vector array and n scalars"
        )
    if np.any(np.abs(a) > 1.0):
        raise PreconditionViolationError("scalars must satisfy |a_j| <= 1")
    if p < 1:
        raise PreconditionViolationError(f"p must be >= 1, got {p}")
    n = X.shape[0]
    if n > 20:
        raise BudgetExceededError(f"sign enumeration capped at n=20, got {n}")
    signs = sign_patterns(n).astype(np.float64)
    lhs = float(np.mean(norm.norm(signs @ (a[:, None] * X)) ** p))
    rhs = float(np.mean(norm.norm(signs @ X) ** p))
    return make_check(
        "sign-contraction",
        {"n": n, "p": p, "norm_p": norm.p},
        lhs,
        rhs,
    )


def exhaustive_b_two_point(n: int, ell: int, m: int,
                           budget: int = TWO_POINT_BUDGET) -> BReport:
    """Exact maximum of b_hat over all two-point witnesses on Z_m^n."""
    dom = TorusDomain(n=n, m=m)
    if m % 2 != 0:
        raise OddMError(f"even m required, got {m}")
    if ell % 2 != 0:
        raise OddEllError(f"even shift required, got ell={ell}")
    N = dom.points
    if N > 20:
        raise PreconditionViolationError(f"exhaustive scan needs m^n <= 20, got {N}")
    if 2**N > budget:
        raise BudgetExceededError(f"2^{N} witnesses exceed budget {budget}")
    bits = _bit_table(2**N, N)
    lhs = np.zeros(2**N)
    for j in range(n):
        perm = _shift_permutation(dom, axis_shift(dom, j, ell))
        lhs += (bits ^ bits[:, perm]).mean(axis=1)
    rhs = np.zeros(2**N)
    pats = sign_patterns(n)
    for eps in pats:
        perm = _shift_permutation(dom, eps)
        rhs += (bits ^ bits[:, perm]).mean(axis=1)
    rhs /= len(pats)
    with np.errstate(divide="ignore", invalid="ignore"):
        bh = np.where(rhs > 0, np.sqrt(lhs / (ell**2 * n * rhs)), 0.0)
    best = int(np.argmax(bh))
    if bh[best] > 1.0 + B_INVARIANT_TOL:
        raise InvariantViolationError(
            f"exhaustive b_hat = {bh[best]} exceeds 1 at n={n} m={m} ell={ell}"
        )
    witness = GridFunction.points(dom, bits[best].astype(np.int64))
    return BReport(
        n=n, m=m, ell=ell, lhs=float(lhs[best]), rhs_raw=float(rhs[best]),
        b_hat=float(bh[best]), degenerate=bool(rhs[best] <= 0),
        mode="exact", witness=witness,
    )


GENERAL_ENUM_CAP = 1 << 16


def _exhaustive_b_space(space: FiniteMetricSpace, n: int, ell: int, m: int,
                        budget: int = TWO_POINT_BUDGET) -> BReport:
    """Exact maximum of b_hat over all maps Z_m^n -> space.

    Two-point unit-distance spaces use the bit-table fast path; anything
    else enumerates assignments in mixed radix, so sizes must be tiny.
    """
    if space.size == 2 and float(space.dist[0, 1]) == 1.0:
        return exhaustive_b_two_point(n, ell, m, budget)
    if m % 2 != 0:
        raise OddMError(f"even m required, got {m}")
    if ell % 2 != 0:
        raise OddEllError(f"even shift required, got ell={ell}")
    dom = TorusDomain(n=n, m=m)
    N = dom.points
    K = space.size
    count = K**N
    if N > 20 or count > min(budget, GENERAL_ENUM_CAP):
        raise BudgetExceededError(
            f"{K}^{N} witnesses exceed the exhaustive cap"
        )
    idx = np.arange(count, dtype=np.int64)
    F = np.empty((count, N), dtype=np.int64)
    div = count
    for pos in range(N):
        div //= K
        F[:, pos] = (idx // div) % K
    d2 = np.asarray(space.dist, dtype=np.float64) ** 2
    lhs = np.zeros(count)
    for j in range(n):
        perm = _shift_permutation(dom, axis_shift(dom, j, ell))
        lhs += d2[F, F[:, perm]].mean(axis=1)
    rhs = np.zeros(count)
    pats = sign_patterns(n)
    for eps in pats:
        perm = _shift_permutation(dom, eps)
        rhs += d2[F, F[:, perm]].mean(axis=1)
    rhs /= len(pats)
    with np.errstate(divide="ignore", invalid="ignore"):
        bh = np.where(rhs > 0, np.sqrt(lhs / (ell**2 * n * rhs)), 0.0)
    best = int(np.argmax(bh))
    if bh[best] > 1.0 + B_INVARIANT_TOL:
        raise InvariantViolationError(
            f"exhaustive b_hat = {bh[best]} exceeds 1 at n={n} m={m} ell={ell}"
        )
    return BReport(
        n=n, m=m, ell=ell, lhs=float(lhs[best]), rhs_raw=float(rhs[best]),
        b_hat=float(bh[best]), degenerate=bool(rhs[best] <= 0),
        mode="exact", witness=GridFunction.points(dom, F[best]),
    )


def tensor_submultiplicativity_check(space: FiniteMetricSpace, ell: int,
                                     k: int, s: int, t: int, m: int,
                                     mode: str = "exhaustive",
                                     trials: int = 200, seed: int = 0,
                                     budget: int = TWO_POINT_BUDGET) -> InequalityCheck:
    """Product rule across tensored dimensions for the diagonal-shift maximum.

    Exhaustive mode compares the exact maximum on Z_m^(ell k) at shift
    s t against the product of exact component maxima at (ell, s) and
    (k, t). Sampled mode checks that no random witness on the product
    beats that product.
    """
    for name, v in (("ell", ell), ("k", k)):
        if v < 1:
            raise PreconditionViolationError(f"{name} must be >= 1, got {v}")
    for name, v in (("s", s), ("t", t)):
        if v % 2 != 0:
            raise OddEllError(f"even {name} required, got {v}")
    comp1 = _exhaustive_b_space(space, ell, s, m, budget)
    comp2 = _exhaustive_b_space(space, k, t, m, budget)
    rhs = comp1.b_hat * comp2.b_hat
    params = {"ell": ell, "k": k, "s": s, "t": t, "m": m, "mode": mode}
    if mode == "exhaustive":
        full = _exhaustive_b_space(space, ell * k, s * t, m, budget)
        return make_check("b-tensor-submultiplicative", params, full.b_hat, rhs)
    if mode == "sampled":
        dom = TorusDomain(n=ell * k, m=m)
        rng = np.random.default_rng(seed)
        worst = 0.0
        for _ in range(trials):
            vals = random_point_values(dom, space.size, rng)
            rep = b_functionals(GridFunction.points(dom, vals), space, s * t)
            if not rep.degenerate:
                worst = max(worst, rep.b_hat)
        params["trials"] = trials
        params["seed"] = seed
        return make_check("b-tensor-submultiplicative", params, worst, rhs)
    raise PreconditionViolationError(f"unknown mode {mode!r}")


def rademacher_cotype_ratio(vectors, p: float, q: float,
                            norm: NormTarget) -> float:
    """(sum_j ||x_j||^q)^(1/q) / (E_eps ||sum_j eps_j x_j||^p)^(1/p), exact.

    Evaluated over all 2^n sign patterns; n is capped at 20.
    """
    _check_pq(p, q)
    X = np.asarray(vectors, dtype=np.complex128)
    if X.ndim != 2:
        raise PreconditionViolationError("vectors must form a 2-d array")
    n = X.shape[0]
    if n > 20:
        raise BudgetExceededError(f"sign enumeration capped at n=20, got {n}")
    num = float(np.power(norm.norm(X), q).sum() ** (1.0 / q))
    signs = sign_patterns(n).astype(np.float64)
    sums = signs @ X
    denom = float(np.mean(norm.norm(sums) ** p) ** (1.0 / p))
    if denom == 0.0:
        return 0.0
    return num / denom


def linear_exponential_witness(vectors, m: int) -> GridFunction:
    """f(x) = sum_j exp(2 pi i x_j / m) v_j on Z_m^n, n = number of vectors.

    Its half-circumference increments collapse coordinate-wise, making
    lhs exactly 2^p * sum_j ||v_j||^p, while every edge increment has
    operator angle at most 4 pi / m after sign averaging.
    """
    X = np.asarray(vectors, dtype=np.complex128)
    if X.ndim != 2:
        raise PreconditionViolationError("vectors must form a 2-d array")
    n = X.shape[0]
    if m % 2 != 0:
        raise OddMError(f"even m required, got {m}")
    dom = TorusDomain(n=n, m=m)
    pts = dom.coords()
    phases = np.exp(2j * np.pi * pts / m)  # (N, n)
    return GridFunction.vector(dom, phases @ X)


def contraction_rhs_bound(vectors, m: int, p: float,
                          norm: NormTarget) -> float:
    """(4 pi / m)^p * E_eps || sum_j eps_j v_j ||^p over full signs."""
    X = np.asarray(vectors, dtype=np.complex128)
    signs = sign_patterns(X.shape[0]).astype(np.float64)
    sums = signs @ X
    return (4.0 * np.pi / m) ** p * float(np.mean(norm.norm(sums) ** p))


@dataclass(frozen=True)
class ScanResult:
    found_m: int
    profile: list  # [(m, gamma_hat), ...] in scan order
    mode: str  # "exact" or "lower-bound"

    def to_json_dict(self) -> dict:
        return {
            "found_m": self.found_m,
            "profile": [[m, g] for m, g in self.profile],
            "mode": self.mode,
        }


def m_parameter_experiment(space_or_norm, n: int, p: float, q: float,
                           gamma_target: float, m_max: int,
                           mode: str = "auto",
                           budget: int = 2000, seed: int = 0) -> ScanResult:
    """Scan even m for the first value whose measured gamma meets the target.

    hilbert mode is exact (p = q = 2 against an l2 target); two-point
    mode is exact by enumeration; search mode only produces lower
    bounds, so its verdict is flagged as such. auto picks the strongest
    applicable mode. Raises NotFoundError with the profile when no even
    m <= m_max qualifies.
    """
    space = space_or_norm if isinstance(space_or_norm, FiniteMetricSpace) else None
    if mode == "auto":
        if space is None:
            mode = "hilbert"
        elif space.size == 2 and m_max**n <= 20:
            mode = "two-point"
        else:
            mode = "search"
    if mode == "hilbert":
        hilbertian = space_or_norm is None or (
            isinstance(space_or_norm, NormTarget) and space_or_norm.p == 2.0
        )
        if q != 2.0 or p != 2.0 or not hilbertian:
            raise PreconditionViolationError(
                "hilbert mode computes the exact p = q = 2 constant of l2"
            )
    elif mode in ("two-point", "search"):
        if space is None:
            raise PreconditionViolationError(
                f"{mode} mode scans a finite metric space, got a norm target"
            )
        if mode == "two-point" and space.size != 2:
            raise PreconditionViolationError(
                f"two-point mode needs a 2-point space, got size {space.size}"
            )
    else:
        raise PreconditionViolationError(f"unknown mode {mode!r}")
    profile = []
    for m in range(2, m_max + 1, 2):
        if mode == "hilbert":
            g, _ = gamma_hilbert_exact(n, m)
            flag = "exact"
        elif mode == "two-point":
            g = gamma_exhaustive_two_point(n, m, p, q).gamma_hat
            flag = "exact"
        else:
            g = gamma_search(space, n, m, p, q, budget, seed).gamma_hat
            flag = "lower-bound"
        profile.append((m, g))
        if g <= gamma_target:
            return ScanResult(found_m=m, profile=profile, mode=flag)
    raise NotFoundError(
        f"no even m <= {m_max} reaches gamma <= {gamma_target}", profile
    )


def shift_growth_bound(n0: int, ell0: int, n: int) -> float:
    """Growth bound 2 * ell0 * n^(log ell0 / log n0) extrapolated from one cell."""
    if n0 < 2:
        raise PreconditionViolationError(f"n0 must be >= 2, got {n0}")
    if ell0 < 1 or n < 1:
        raise PreconditionViolationError("ell0 and n must be >= 1")
    return 2.0 * ell0 * n ** (math.log(ell0) / math.log(n0))


def grid_distortion_bound(n: int, q: float, K: float) -> float:
    """Distortion lower bound n^(1/q) / (2K) for bijections of Z_m^n."""
    if n < 1 or q < 1 or K <= 0:
        raise PreconditionViolationError("need n >= 1, q >= 1, K > 0")
    return n ** (1.0 / q) / (2.0 * K)
