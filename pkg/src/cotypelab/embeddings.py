"""Explicit embeddings, grid extraction, and distortion obstructions.

Cycle/grid/torus conversions, diagonal-graph geodesics, extraction of a
near-isometric grid copy from a near-extremal witness, the moduli-based
obstruction for maps of the exponential net, and the distortion lower
bound for injections of the torus into Hilbert-like targets.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .checks import InequalityCheck, make_check
from .cotype import cotype_functionals, gamma_hilbert_exact
from .errors import (
    HypothesisFailedError,
    PreconditionViolationError,
)
from .gridops import axis_shift, roll_values, sign_patterns
from .harmonic import GridFunction
from .spaces import (
    EmbeddingRecord,
    FiniteMetricSpace,
    TorusDomain,
    distortion,
    grid_points,
    moduli,
    points_space,
    snowflake,
    torus_space,
)
from .targets import as_target


@dataclass(frozen=True)
class GeodesicPath:
    """A length-s walk whose every step changes all coordinates by +/-1."""

    steps: np.ndarray  # (s+1, n) points mod m
    j: int
    sign: int
    through_index: int  # step at which the second prescribed point appears

    @property
    def length(self) -> int:
        return self.steps.shape[0] - 1

    def to_json_dict(self) -> dict:
        return {
            "j": self.j,
            "sign": self.sign,
            "through_index": self.through_index,
            "steps": [[int(c) for c in row] for row in self.steps],
        }


@dataclass(frozen=True)
class VSet:
    """Points with every coordinate even and within [0, s/2]."""

    s: int
    n: int
    members: np.ndarray  # ((s/4+1)^n, n)

    @classmethod
    def of(cls, s: int, n: int) -> "VSet":
        if s % 4 != 0 or s < 4:
            raise PreconditionViolationError(
                f"the extraction scale must be divisible by 4, got s={s}"
            )
        axis = np.arange(0, s // 2 + 1, 2, dtype=np.int64)
        grids = np.meshgrid(*([axis] * n), indexing="ij")
        members = np.stack([g.ravel() for g in grids], axis=-1)
        assert members.shape[0] == (s // 4 + 1) ** n
        return cls(s=s, n=n, members=members)

    def __contains__(self, point) -> bool:
        pt = np.asarray(point, dtype=np.int64)
        return bool(
            pt.shape == (self.n,)
            and np.all(pt % 2 == 0)
            and np.all(pt >= 0)
            and np.all(pt <= self.s // 2)
        )


def grid_to_torus(m: int, n: int, budget: int = 1 << 16) -> EmbeddingRecord:
    """Inclusion of the grid {0..m}^n into the circumference-2m torus.

    Coordinate differences never exceed m, so the wrap-around metric
    agrees with the grid metric: distortion exactly 1.
    """
    dom = TorusDomain(n=n, m=2 * m)
    source_pts = grid_points(n, m)
    if source_pts.shape[0] ** 2 > budget * 4:
        raise PreconditionViolationError(
            f"grid with {source_pts.shape[0]} points is beyond desk scale"
        )
    source = points_space(source_pts, math.inf)
    target = torus_space(dom, budget=budget)
    mapping = np.array([dom.lin(p) for p in source_pts], dtype=np.int64)
    return distortion(mapping, source, target)


def _frechet_vectors(m: int, anchors) -> np.ndarray:
    """Rows x of d_{Z_{2m}}(x, a) over the anchor list a."""
    two_m = 2 * m
    x = np.arange(two_m, dtype=np.int64)[:, None]
    a = np.asarray(anchors, dtype=np.int64)[None, :]
    diff = np.abs(x - a)
    return np.minimum(diff, two_m - diff)


def frechet_cycle(m: int) -> EmbeddingRecord:
    """x -> (d(x,0), ..., d(x,2m-1)): the cycle in the sup-norm grid.

    Coordinate a realizes the distance of the pair {x, y} whenever
    a = y, so the sup equals the cycle distance: distortion exactly 1.
    """
    if m < 1:
        raise PreconditionViolationError(f"m must be >= 1, got {m}")
    source = torus_space(TorusDomain(n=1, m=2 * m))
    vectors = _frechet_vectors(m, np.arange(2 * m))
    target = points_space(vectors, math.inf)
    mapping = np.arange(2 * m, dtype=np.int64)
    return distortion(mapping, source, target)


def sparse_anchors(m: int, eps: float) -> np.ndarray:
    """ceil(1/eps)+1 anchor points spread around the cycle of length 2m.

    Anchors are evenly spaced at floor(2mt/(T+1)); spacing never exceeds
    2*eps*m. The two-anchor case avoids the antipodal pair {0, m}, which
    is fixed by a reflection and would collide x with 2m-x: it uses
    {0, floor(2m/3)} instead.
    """
    if not 0 < eps <= 1:
        raise PreconditionViolationError(f"eps must lie in (0, 1], got {eps}")
    T = math.ceil(1.0 / eps)
    if T == 1:
        return np.array([0, (2 * m) // 3], dtype=np.int64)
    return np.array([(2 * m * t) // (T + 1) for t in range(T + 1)],
                    dtype=np.int64)


def sparse_frechet_cycle(m: int, eps: float) -> EmbeddingRecord:
    """Distance profile against a sparse anchor set; distortion <= 1+6 eps."""
    anchors = sparse_anchors(m, eps)
    source = torus_space(TorusDomain(n=1, m=2 * m))
    vectors = _frechet_vectors(m, anchors)
    target = points_space(vectors, math.inf)
    mapping = np.arange(2 * m, dtype=np.int64)
    return distortion(mapping, source, target)


def torus_to_grid_full(m: int, n: int, budget: int = 1 << 16) -> EmbeddingRecord:
    """Concatenated per-coordinate distance profiles: an isometry.

    Z_{2m}^n lands in the sup-norm grid of dimension 2mn; the sup over
    the n blocks recovers the torus metric coordinate by coordinate.
    """
    dom = TorusDomain(n=n, m=2 * m)
    dom.require_points(budget)
    coords = dom.coords()  # (N, n)
    table = _frechet_vectors(m, np.arange(2 * m))  # (2m, 2m)
    blocks = [table[coords[:, j]] for j in range(n)]
    vectors = np.concatenate(blocks, axis=1)  # (N, 2mn)
    source = torus_space(dom, budget=budget)
    target = points_space(vectors, math.inf)
    mapping = np.arange(dom.points, dtype=np.int64)
    return distortion(mapping, source, target)


def _require_extraction_scale(s: int, m: int) -> None:
    if s % 4 != 0 or s < 4:
        raise PreconditionViolationError(
            f"extraction scale must be a positive multiple of 4, got s={s}"
        )
    if m < 2 * s:
        raise PreconditionViolationError(
            f"need m >= 2s for the diagonal constructions, got m={m} s={s}"
        )


def diag_geodesic_through(x, y, s: int, domain: TorusDomain) -> GeodesicPath:
    """A length-s all-diagonal walk from z in {x, y} to z + s e_j through both.

    j maximizes the coordinate gap |x_j - y_j| (smallest j on ties) and z
    is whichever of the two points has the smaller j-th coordinate. The
    walk reaches the other point at step max|x_j - y_j|, doubles back to
    z + 2t e_j, and then alternates fully diagonal steps to z + s e_j.
    """
    _require_extraction_scale(s, domain.m)
    n = domain.n
    vset = VSet.of(s, n)
    xv = np.asarray(x, dtype=np.int64)
    yv = np.asarray(y, dtype=np.int64)
    for label, pt in (("x", xv), ("y", yv)):
        if pt not in vset:
            raise PreconditionViolationError(
                f"{label}={pt.tolist()} is not an even point of [0, s/2]^n"
            )
    gaps = np.abs(yv - xv)
    t = int(gaps.max())
    j = int(np.argmax(gaps))
    if yv[j] >= xv[j]:
        z, w = xv, yv
    else:
        z, w = yv, xv

    steps = [z.copy()]
    cur = z.copy()
    eps_hist = []
    delta_hist = []
    for _ in range(t // 2):
        eps = np.where(cur > w, -1, 1).astype(np.int64)
        delta = np.where(cur < w, 1, -1).astype(np.int64)
        cur = cur + eps
        steps.append(cur.copy())
        cur = cur + delta
        steps.append(cur.copy())
        eps_hist.append(eps)
        delta_hist.append(delta)
    assert np.array_equal(cur, w)

    ej2 = np.zeros(n, dtype=np.int64)
    ej2[j] = 2
    for eps, delta in zip(eps_hist, delta_hist):
        cur = cur + (ej2 - eps)
        steps.append(cur.copy())
        cur = cur + (ej2 - delta)
        steps.append(cur.copy())
    assert np.array_equal(cur, z + 2 * t * np.eye(n, dtype=np.int64)[j])

    up = np.ones(n, dtype=np.int64)
    down = 2 * np.eye(n, dtype=np.int64)[j] - up
    for _ in range((s - 2 * t) // 2):
        cur = cur + up
        steps.append(cur.copy())
        cur = cur + down
        steps.append(cur.copy())

    arr = np.array(steps, dtype=np.int64) % domain.m
    diffs = (np.diff(np.array(steps, dtype=np.int64), axis=0))
    assert np.all(np.abs(diffs) == 1) and arr.shape[0] == s + 1
    return GeodesicPath(steps=arr, j=j, sign=1, through_index=t)


def _edge_activity(f: GridFunction, target) -> np.ndarray:
    """E over full sign patterns of d(f(x+eps), f(x))^2, per point."""
    pats = sign_patterns(f.domain.n)
    acc = np.zeros(f.domain.points)
    for eps in pats:
        shifted = roll_values(f.domain, f.values, eps)
        acc += target.pairwise(shifted, f.values) ** 2
    return acc / len(pats)


def _ball_sum(domain: TorusDomain, values: np.ndarray,
              radius: int) -> np.ndarray:
    """Per-point sum of values over the sup-norm ball of the given radius."""
    acc = values
    for ax in range(domain.n):
        acc = sum(
            roll_values(domain, acc, axis_shift(domain, ax, r))
            for r in range(-radius, radius + 1)
        )
    return acc


def _balanced_sign_rows(s: int) -> np.ndarray:
    """All {-1,1} rows of length s summing to zero, as a (C(s,s/2), s) array."""
    from itertools import combinations

    rows = []
    for pos in combinations(range(s), s // 2):
        row = -np.ones(s, dtype=np.int64)
        row[list(pos)] = 1
        rows.append(row)
    return np.array(rows, dtype=np.int64)


def _geodesic_defects(f: GridFunction, target, s: int) -> np.ndarray:
    """Per-point sum over j, both signs, and every diagonal geodesic of
    the squared deviation of step distances from their path average.

    Geodesics from x to x + sign*s*e_j move coordinate j by sign each
    step while every other coordinate takes a balanced +/-1 pattern;
    translation invariance lets one offset table serve every basepoint.
    """
    dom = f.domain
    n = dom.n
    N = dom.points
    balanced = _balanced_sign_rows(s)  # (paths_per_axis, s)
    defect = np.zeros(N)
    for j in range(n):
        for sign in (1, -1):
            base = target.pairwise(
                roll_values(dom, f.values, axis_shift(dom, j, sign * s)),
                f.values,
            ).astype(np.float64) / s
            index_rest = [ax for ax in range(n) if ax != j]
            pattern_sets = np.meshgrid(
                *([np.arange(balanced.shape[0])] * len(index_rest)),
                indexing="ij",
            )
            combos = (np.stack([g.ravel() for g in pattern_sets], axis=-1)
                      if index_rest else np.zeros((1, 0), dtype=np.int64))
            for combo in combos:
                offsets = np.zeros((s + 1, n), dtype=np.int64)
                offsets[1:, j] = sign * np.arange(1, s + 1)
                for ax, pat in zip(index_rest, combo):
                    offsets[1:, ax] = np.cumsum(balanced[pat])
                prev = f.values
                for ell in range(1, s + 1):
                    curv = roll_values(dom, f.values, offsets[ell])
                    d = target.pairwise(curv, prev).astype(np.float64)
                    defect += (d - base) ** 2
                    prev = curv
    return defect


def extract_grid(f: GridFunction, space, s: int,
                 domain: TorusDomain | None = None):
    """Recover a sup-norm grid copy from a witness with near-maximal
    long-shift energy; returns (EmbeddingRecord, report dict).

    Measures the deficiency eta of the witness, locates the basepoint
    pair by the averaged-defect functional, normalizes edge activity,
    reflects the coordinates, and maps x -> f(2x) on the even sub-box.
    When eta = 0 the returned map has distortion 1 (within 1e-9).
    """
    dom = domain if domain is not None else f.domain
    n, m = dom.n, dom.m
    _require_extraction_scale(s, m)
    target = as_target(space)

    lhs_s = 0.0
    for j in range(n):
        shifted = roll_values(dom, f.values, axis_shift(dom, j, s))
        lhs_s += float(np.mean(target.pairwise(shifted, f.values) ** 2))
    activity = _edge_activity(f, target)
    rhs_full = float(activity.mean())
    if rhs_full <= 0.0:
        raise HypothesisFailedError(
            "constant witness: long-shift energy is zero", eta=1.0
        )
    eta = max(0.0, 1.0 - lhs_s / (s**2 * n * rhs_full))
    if eta >= 1.0:
        raise HypothesisFailedError(
            "witness has no long-shift energy", eta=eta
        )

    defect = _geodesic_defects(f, target, s)
    psi = 2.0 * eta * s * n * 2.0 ** (s * n) * activity - defect
    radius = s - 1
    psi_ball = _ball_sum(dom, psi, radius)
    x0 = int(np.argmax(psi_ball))

    act_ball = _ball_sum(dom, activity, radius)
    ball_points = float((2 * s - 1) ** n)
    avg_act = float(act_ball[x0]) / ball_points
    if avg_act <= 0.0:
        raise HypothesisFailedError(
            "no edge activity near the selected basepoint", eta=eta
        )
    scale = 1.0 / math.sqrt(avg_act)

    # y0: strongest normalized edge activity within the ball around x0
    x0c = np.asarray(dom.coord_of(x0), dtype=np.int64)
    masked = np.full(dom.points, -np.inf)
    offs = np.arange(-radius, radius + 1, dtype=np.int64)
    grids = np.meshgrid(*([offs] * n), indexing="ij")
    ball_offsets = np.stack([g.ravel() for g in grids], axis=-1)
    for off in ball_offsets:
        idx = dom.lin((x0c + off) % m)
        masked[idx] = activity[idx]
    y0 = int(np.argmax(masked))
    y0c = np.asarray(dom.coord_of(y0), dtype=np.int64)

    sigma = np.where(((x0c - y0c) % m) < s, 1, -1).astype(np.int64)

    # f'(x) = f(y0 + sigma * x), restricted to the even sub-box, halved
    vset = VSet.of(s, n)
    src_pts = vset.members // 2  # the sup-norm box {0..s/4}^n
    src = points_space(src_pts, math.inf)
    mapped_points = (y0c[None, :] + sigma[None, :] * vset.members) % m
    mapped_idx = np.array([dom.lin(pt) for pt in mapped_points],
                          dtype=np.int64)

    if hasattr(target, "space") and isinstance(getattr(target, "space", None),
                                               FiniteMetricSpace):
        tgt_space = target.space
        mapping = np.asarray(f.values, dtype=np.int64)[mapped_idx]
    else:
        values = f.values[mapped_idx]
        k = values.shape[0]
        table = np.zeros((k, k))
        for i in range(k):
            table[i] = target.pairwise(
                np.broadcast_to(values[i], values.shape), values
            )
        table = (table + table.T) / 2.0
        np.fill_diagonal(table, 0.0)
        tgt_space = FiniteMetricSpace(
            labels=tuple(str(i) for i in range(k)),
            dist=table,
        )
        mapping = np.arange(k, dtype=np.int64)

    record = distortion(mapping, src, tgt_space)
    report = {
        "eta": eta,
        "lhs_long_shift": lhs_s,
        "rhs_edge_energy": rhs_full,
        "x0": [int(c) for c in x0c],
        "y0": [int(c) for c in y0c],
        "sigma": [int(c) for c in sigma],
        "scale": scale,
        "psi_ball_max": float(psi_ball[x0]),
        "activity_y0_normalized": float(activity[y0]) * scale**2,
        "s": s,
        "distortion": record.distortion,
    }
    return record, report


def coarse_obstruction_check(values, space, n: int, m: int, p: float,
                             q: float, r: float, s_scale: float,
                             gamma: float | None = None) -> InequalityCheck:
    """Compression/expansion moduli comparison for maps of the scaled
    exponential net u(x) = (s e^(2 pi i x_j / m))_j in l_r^n.

        n^(1/q) * omega(2s) <= gamma * m * Omega(2 pi s n^(1/r) / m)

    with gamma the measured torus functional of the induced map unless
    an explicit value is supplied. omega/Omega are the infimum/supremum
    of target distances over net pairs at source distance >= / <= t.
    """
    dom = TorusDomain(n=n, m=m)
    vals = np.asarray(values, dtype=np.int64)
    if vals.shape != (dom.points,):
        raise PreconditionViolationError(
            f"need one target index per torus point ({dom.points})"
        )
    g = GridFunction.points(dom, vals)
    rep = cotype_functionals(g, space, p, q)
    gamma_used = rep.gamma_hat if gamma is None else gamma

    coords = dom.coords()
    net = s_scale * np.exp(2j * np.pi * coords / m)  # (N, n) complex
    net_space = points_space(net, r)
    tables = moduli(vals, net_space, space)
    omega = tables.compression_at(2.0 * s_scale)
    big_omega = tables.expansion_at(
        2.0 * np.pi * s_scale * n ** (1.0 / r) / m
    )
    lhs = n ** (1.0 / q) * omega
    rhs = gamma_used * m * big_omega
    return make_check(
        "net-moduli-obstruction",
        {"n": n, "m": m, "p": p, "q": q, "r": r, "s": s_scale,
         "gamma": repr(gamma_used)},
        lhs,
        rhs,
    )


def _random_injection(rng, count: int, d: int) -> np.ndarray:
    """Gaussian point cloud, resampled if any pair nearly collides."""
    while True:
        pts = rng.standard_normal((count, d))
        diff = pts[:, None, :] - pts[None, :, :]
        dist = np.sqrt((diff**2).sum(axis=2))
        dist[np.diag_indices(count)] = np.inf
        if dist.min() > 1e-9:
            return pts


def grid_lower_bound_check(n: int, m: int, d: int, trials: int, seed: int,
                           target: str = "l2",
                           adversarial_steps: int = 0) -> InequalityCheck:
    """Every sampled injection of the torus into l_2^d (or into l_1^d
    measured under square-rooted distances) has distortion at least
    sqrt(n) / (2 * exact Hilbert constant).

    Optionally descends on distortion by point nudges to stress the
    bound adversarially; the bound must survive every trial.
    """
    if target not in ("l2", "l1-sqrt"):
        raise PreconditionViolationError(f"unknown target {target!r}")
    dom = TorusDomain(n=n, m=m)
    gam, _ = gamma_hilbert_exact(n, m)
    bound = math.sqrt(n) / (2.0 * gam)
    source = torus_space(dom)
    rng = np.random.default_rng(seed)
    mapping = np.arange(dom.points, dtype=np.int64)

    def measure(pts: np.ndarray) -> float:
        if target == "l2":
            tgt = points_space(pts, 2.0)
        else:
            tgt = snowflake(points_space(pts, 1.0), 0.5)
        return distortion(mapping, source, tgt).distortion

    worst = math.inf
    worst_pts = None
    for _ in range(trials):
        pts = _random_injection(rng, dom.points, d)
        val = measure(pts)
        if val < worst:
            worst = val
            worst_pts = pts
    for _ in range(adversarial_steps):
        i = int(rng.integers(dom.points))
        cand = worst_pts.copy()
        cand[i] += 0.25 * rng.standard_normal(d)
        diff = cand[:, None, :] - cand[None, :, :]
        dd = np.sqrt((diff**2).sum(axis=2))
        dd[np.diag_indices(dom.points)] = np.inf
        if dd.min() <= 1e-9:
            continue
        val = measure(cand)
        if val < worst:
            worst = val
            worst_pts = cand
    return make_check(
        "injection-distortion-floor",
        {"n": n, "m": m, "d": d, "trials": trials, "seed": seed,
         "target": target, "adversarial_steps": adversarial_steps},
        bound,
        worst,
    )
