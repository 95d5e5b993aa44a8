"""Window-averaging operators on the torus and their two key inequalities.

For a coordinate j and an odd window radius k < m/2, the index set
collects the offsets y in [-k, k]^n whose j-th entry is even and whose
other entries are all odd; averaging f over x + (that set) produces an
operator that nearly inverts itself along coordinate j while keeping
full-sign edge increments under control. The two checks in this module
certify the quantitative forms of those two statements.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .checks import InequalityCheck, make_check
from .errors import (
    EvenKError,
    KTooLargeError,
    PreconditionViolationError,
)
from .gridops import axis_shift, roll_values, sign_patterns
from .harmonic import GridFunction, central_diff
from .spaces import TorusDomain
from .targets import as_target


@dataclass(frozen=True)
class SmoothingIndexSet:
    j: int
    k: int
    members: np.ndarray  # (size, n) integer offsets

    @property
    def size(self) -> int:
        return self.members.shape[0]

    def multiplier(self, freq, m: int) -> complex:
        """Average of the frequency-freq character over the member offsets."""
        kv = np.asarray(freq, dtype=np.int64)
        phases = np.exp(2j * np.pi * (self.members @ kv) / m)
        return complex(phases.mean())


def _validate_window(k: int, domain: TorusDomain) -> None:
    if k % 2 == 0 or k < 1:
        raise EvenKError(f"window radius must be a positive odd integer, got {k}")
    if not k < domain.m / 2:
        raise KTooLargeError(f"need k < m/2, got k={k} with m={domain.m}")


def smoothing_set(j: int, k: int, domain: TorusDomain) -> SmoothingIndexSet:
    """Offsets y in [-k,k]^n with y_j even and every other entry odd.

    Cardinality is k * (k+1)^(n-1): k even residues on coordinate j,
    k+1 odd residues elsewhere.
    """
    n = domain.n
    if not 0 <= j < n:
        raise PreconditionViolationError(f"coordinate {j} outside 0..{n - 1}")
    _validate_window(k, domain)
    evens = range(-(k - 1), k, 2)
    odds = range(-k, k + 1, 2)
    axes = [list(evens) if ax == j else list(odds) for ax in range(n)]
    members = np.array(list(itertools.product(*axes)), dtype=np.int64)
    assert members.shape[0] == k * (k + 1) ** (n - 1)
    return SmoothingIndexSet(j=j, k=k, members=members)


def smoothing_apply(f: GridFunction, j: int, k: int) -> GridFunction:
    """Average f over the translated index set: an averaging convolution.

    Fixes constants and is a pointwise norm contraction relative to the
    window maximum. Vector-valued input only; metric-valued witnesses
    enter the inequality checks through distances instead.
    """
    if not f.is_vector:
        raise PreconditionViolationError(
            "smoothing averages vectors; point-valued input has no mean"
        )
    sset = smoothing_set(j, k, f.domain)
    acc = np.zeros_like(f.values)
    for y in sset.members:
        acc += roll_values(f.domain, f.values, y)
    return GridFunction.vector(f.domain, acc / sset.size)


def _norm_of(target):
    norm = getattr(target, "norm", None)
    if norm is None:
        raise PreconditionViolationError(
            "this check needs a normed codomain for its left-hand side"
        )
    return norm


def _edge_energy(f: GridFunction, target, p: float) -> float:
    """E over full sign patterns of avg_x d(f(x+eps), f(x))^p."""
    pats = sign_patterns(f.domain.n)
    total = 0.0
    for eps in pats:
        shifted = roll_values(f.domain, f.values, eps)
        total += float(np.mean(target.pairwise(shifted, f.values) ** p))
    return total / len(pats)


def check_lemma_approx(f: GridFunction, space, j: int, k: int,
                       p: float) -> InequalityCheck:
    """Window average stays close to f: the approximation inequality.

        avg_x ||A_j f(x) - f(x)||^p
            <= 2^p k^p E_{eps in {-1,1}^n} avg_x d(f(x+eps), f(x))^p
               + 2^(p-1) avg_x d(f(x+e_j), f(x))^p

    For a metric-valued witness the left side is replaced by the window
    average of d(f(x+y), f(x))^p, which dominates the normed form.
    """
    if p < 1:
        raise PreconditionViolationError(f"p must be >= 1, got {p}")
    dom = f.domain
    target = as_target(space)
    sset = smoothing_set(j, k, dom)
    if f.is_vector:
        norm = _norm_of(target)
        smoothed = smoothing_apply(f, j, k)
        lhs = float(np.mean(norm(smoothed.values - f.values) ** p))
    else:
        total = 0.0
        for y in sset.members:
            shifted = roll_values(dom, f.values, y)
            total += float(np.mean(target.pairwise(shifted, f.values) ** p))
        lhs = total / sset.size
    ej = roll_values(dom, f.values, axis_shift(dom, j, 1))
    ej_term = float(np.mean(target.pairwise(ej, f.values) ** p))
    rhs = 2.0**p * k**p * _edge_energy(f, target, p) + 2.0 ** (p - 1) * ej_term
    return make_check(
        "smoothing-approximation",
        {"n": dom.n, "m": dom.m, "j": j, "k": k, "p": p},
        lhs,
        rhs,
    )


def _smoothed_central_diffs(f: GridFunction, k: int) -> np.ndarray:
    """Stack of central differences of the per-coordinate window averages."""
    return np.stack([
        central_diff(smoothing_apply(f, j, k), j).values
        for j in range(f.domain.n)
    ])


def check_lemma_cancellation(f: GridFunction, space, k: int, p: float,
                             eps) -> InequalityCheck:
    """Signed sum of smoothed central differences: the cancellation bound.

        avg_x || sum_j eps_j (A_j f(x+e_j) - A_j f(x-e_j)) ||^p
            <= 3^(p-1) avg_x ||f(x+eps) - f(x-eps)||^p
               + (24^p n^(2p-1) / k^p) sum_j avg_x ||f(x+e_j) - f(x)||^p

    for any fixed full sign pattern eps. Vector-valued witnesses only.
    """
    diffs = _smoothed_central_diffs(f, k)
    return _cancellation_check_from(f, space, k, p, eps, diffs)


def _cancellation_check_from(f: GridFunction, space, k: int, p: float,
                             eps, diffs: np.ndarray) -> InequalityCheck:
    if p < 1:
        raise PreconditionViolationError(f"p must be >= 1, got {p}")
    if not f.is_vector:
        raise PreconditionViolationError("cancellation check needs vectors")
    dom = f.domain
    n = dom.n
    ev = np.asarray(eps, dtype=np.int64)
    if ev.shape != (n,) or not np.all(np.abs(ev) == 1):
        raise PreconditionViolationError(
            f"eps must be a full sign pattern of length {n}"
        )
    target = as_target(space)
    norm = _norm_of(target)

    signed = np.tensordot(ev.astype(np.complex128), diffs, axes=(0, 0))
    lhs = float(np.mean(norm(signed) ** p))

    fwd = roll_values(dom, f.values, ev)
    bwd = roll_values(dom, f.values, -ev)
    eps_term = float(np.mean(norm(fwd - bwd) ** p))
    edge_sum = 0.0
    for j in range(n):
        ej = roll_values(dom, f.values, axis_shift(dom, j, 1))
        edge_sum += float(np.mean(norm(ej - f.values) ** p))
    rhs = (3.0 ** (p - 1) * eps_term
           + 24.0**p * n ** (2 * p - 1) / k**p * edge_sum)
    return make_check(
        "smoothing-cancellation",
        {"n": n, "m": dom.m, "k": k, "p": p,
         "eps": "".join("+" if e > 0 else "-" for e in ev)},
        lhs,
        rhs,
    )


def check_lemma_cancellation_all(f: GridFunction, space, k: int,
                                 p: float) -> list[InequalityCheck]:
    """The cancellation bound for every full sign pattern, sharing work."""
    diffs = _smoothed_central_diffs(f, k)
    return [
        _cancellation_check_from(f, space, k, p, eps, diffs)
        for eps in sign_patterns(f.domain.n)
    ]


def _climb_margin(make_witness, check_of, steps: int, seed: int,
                  scale: float = 0.7) -> InequalityCheck:
    """Maximize lhs - rhs by random single-point nudges; returns the
    final witness's check. A positive margin would falsify the lemma."""
    rng = np.random.default_rng(seed)
    values = make_witness(rng)
    best = check_of(values)
    margin = best.lhs - best.rhs
    N, d = values.shape
    for _ in range(steps):
        x = int(rng.integers(N))
        old = values[x].copy()
        values[x] = old + scale * (rng.standard_normal(d)
                                   + 1j * rng.standard_normal(d))
        cand = check_of(values)
        if cand.lhs - cand.rhs > margin:
            margin = cand.lhs - cand.rhs
            best = cand
        else:
            values[x] = old
    return best


def adversarial_approx_search(n: int, m: int, j: int, k: int, p: float,
                              norm, dim: int = 2, steps: int = 60,
                              seed: int = 0) -> InequalityCheck:
    """Hill-climb the approximation margin; the result should never pass 0."""
    dom = TorusDomain(n=n, m=m)

    def make(rng):
        return (rng.standard_normal((dom.points, dim))
                + 1j * rng.standard_normal((dom.points, dim)))

    def check(values):
        return check_lemma_approx(GridFunction.vector(dom, values.copy()),
                                  norm, j, k, p)

    return _climb_margin(make, check, steps, seed)


def adversarial_cancellation_search(n: int, m: int, k: int, p: float, eps,
                                    norm, dim: int = 2, steps: int = 60,
                                    seed: int = 0) -> InequalityCheck:
    """Hill-climb the cancellation margin; the result should never pass 0."""
    dom = TorusDomain(n=n, m=m)

    def make(rng):
        return (rng.standard_normal((dom.points, dim))
                + 1j * rng.standard_normal((dom.points, dim)))

    def check(values):
        return check_lemma_cancellation(GridFunction.vector(dom, values.copy()),
                                        norm, k, p, eps)

    return _climb_margin(make, check, steps, seed)
