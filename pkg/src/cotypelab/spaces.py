"""Finite metric spaces, torus domains, and embedding measurements.

Points of a finite metric space are integer indices into a validated
distance table. Points of the discrete torus are n-tuples of residues
mod m, linearized row-major (last coordinate varies fastest); that
linearization is part of the file and report contract.
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    AlphaOutOfRangeError,
    AsymmetryError,
    BudgetExceededError,
    DimensionMismatchError,
    NegativeDistanceError,
    NonzeroDiagonalError,
    NotInjectiveError,
    OddMError,
    PreconditionViolationError,
    SchemaViolationError,
    TriangleViolationError,
    UnreachableError,
    ZeroOffDiagonalError,
)

TRIANGLE_SLACK_REL = 1e-12  # additive slack is this times the largest distance


@dataclass(frozen=True)
class FiniteMetricSpace:
    """A finite metric space given by labels and a validated distance table."""

    labels: tuple
    dist: np.ndarray  # (N, N) float64, symmetric, zero diagonal

    @property
    def size(self) -> int:
        return len(self.labels)

    @property
    def diameter(self) -> float:
        return float(self.dist.max()) if self.size else 0.0

    def to_json_dict(self) -> dict:
        return {"labels": list(self.labels), "dist": self.dist.tolist()}

    def save(self, path: str) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_json_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")


@dataclass(frozen=True)
class TorusDomain:
    """The group Z_m^n as an indexing domain.

    Linear indices follow row-major order on (m,)*n, so the last
    coordinate is the fastest-varying one.
    """

    n: int
    m: int

    def __post_init__(self):
        if self.n < 1 or self.m < 1:
            raise PreconditionViolationError(
                f"torus needs n >= 1 and m >= 1, got n={self.n} m={self.m}"
            )

    @property
    def points(self) -> int:
        return self.m**self.n

    @property
    def shape(self) -> tuple:
        return (self.m,) * self.n

    def require_points(self, budget: int) -> None:
        if self.points > budget:
            raise BudgetExceededError(
                f"domain has {self.points} points, budget is {budget}"
            )

    def coords(self) -> np.ndarray:
        """All points as an (m^n, n) int array in linear-index order."""
        grids = np.indices(self.shape).reshape(self.n, self.points)
        return grids.T.copy()

    def lin(self, coord: Sequence[int]) -> int:
        c = np.mod(np.asarray(coord, dtype=np.int64), self.m)
        return int(np.ravel_multi_index(tuple(c), self.shape))

    def coord_of(self, index: int) -> tuple:
        return tuple(int(v) for v in np.unravel_index(index, self.shape))


def torus_distance(x, y, m: int):
    """Word metric of Z_m^n where one step may move every coordinate by 1.

    Equals max_j min(|x_j - y_j|, m - |x_j - y_j|). Integer in, integer out.
    Accepts single coordinates, tuples, or arrays of shape (..., n).
    """
    xa = np.asarray(x, dtype=np.int64)
    ya = np.asarray(y, dtype=np.int64)
    if xa.shape != ya.shape:
        raise DimensionMismatchError(f"shapes {xa.shape} and {ya.shape} differ")
    diff = np.abs(np.mod(xa, m) - np.mod(ya, m))
    circ = np.minimum(diff, m - diff)
    if circ.ndim == 0:
        return int(circ)
    out = circ.max(axis=-1)
    return int(out) if out.ndim == 0 else out


def grid_distance(x, y, p: float):
    """l_p distance between integer grid points; p may be math.inf."""
    xa = np.asarray(x, dtype=np.int64)
    ya = np.asarray(y, dtype=np.int64)
    if xa.shape != ya.shape:
        raise DimensionMismatchError(f"shapes {xa.shape} and {ya.shape} differ")
    if not math.isinf(p) and p < 1:
        raise PreconditionViolationError(f"p must be >= 1, got {p}")
    diff = np.abs(xa - ya)
    if math.isinf(p):
        out = diff.max(axis=-1)
    elif p == 1:
        out = diff.sum(axis=-1)
    else:
        out = np.power(np.power(diff.astype(np.float64), p).sum(axis=-1),
                       1.0 / p)
        return float(out) if out.ndim == 0 else out
    return int(out) if out.ndim == 0 else out


def _first_true(mask: np.ndarray):
    """Index tuple of the row-major first True entry, or None."""
    flat = np.flatnonzero(mask)
    if flat.size == 0:
        return None
    return np.unravel_index(flat[0], mask.shape)


def validate_metric(table, labels: Iterable | None = None,
                    json_path: str = "$.dist") -> FiniteMetricSpace:
    """Validate a distance table and wrap it as a FiniteMetricSpace.

    Reports the first violated axiom (scanning row-major) with witness
    indices and, for tables loaded from JSON, the path of the offending
    entry. Triangle checks allow additive slack of 1e-12 times the
    largest distance.
    """
    arr = np.asarray(table, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise SchemaViolationError(
            f"distance table must be square, got shape {arr.shape}", json_path
        )
    n = arr.shape[0]
    if n == 0:
        raise SchemaViolationError("distance table is empty", json_path)
    if not np.all(np.isfinite(arr)):
        i, j = _first_true(~np.isfinite(arr))
        raise SchemaViolationError(
            f"non-finite entry at ({i},{j})", f"{json_path}[{i}][{j}]"
        )

    loc = _first_true(arr < 0)
    if loc is not None:
        i, j = loc
        raise NegativeDistanceError(
            f"dist[{i}][{j}] = {arr[i, j]} is negative",
            indices=(int(i), int(j)),
            json_path=f"{json_path}[{i}][{j}]",
        )
    diag = np.diagonal(arr)
    bad = np.flatnonzero(diag != 0)
    if bad.size:
        i = int(bad[0])
        raise NonzeroDiagonalError(
            f"dist[{i}][{i}] = {diag[i]} must be 0",
            indices=(i, i),
            json_path=f"{json_path}[{i}][{i}]",
        )
    loc = _first_true(arr != arr.T)
    if loc is not None:
        i, j = loc
        raise AsymmetryError(
            f"dist[{i}][{j}] = {arr[i, j]} but dist[{j}][{i}] = {arr[j, i]}",
            indices=(int(i), int(j)),
            json_path=f"{json_path}[{i}][{j}]",
        )
    off = arr == 0
    np.fill_diagonal(off, False)
    loc = _first_true(off)
    if loc is not None:
        i, j = loc
        raise ZeroOffDiagonalError(
            f"distinct points {i} and {j} are at distance 0",
            indices=(int(i), int(j)),
            json_path=f"{json_path}[{i}][{j}]",
        )
    slack = TRIANGLE_SLACK_REL * float(arr.max())
    # viol[i,k,j]: going through k beats the direct entry by more than slack
    through = arr[:, :, None] + arr[None, :, :]
    viol = arr[:, None, :] > through + slack
    loc = _first_true(viol)
    if loc is not None:
        i, k, j = loc
        raise TriangleViolationError(
            f"dist[{i}][{j}] = {arr[i, j]} exceeds "
            f"dist[{i}][{k}] + dist[{k}][{j}] = {arr[i, k] + arr[k, j]}",
            indices=(int(i), int(j), int(k)),
            json_path=f"{json_path}[{i}][{j}]",
        )

    if labels is None:
        labels = tuple(str(i) for i in range(n))
    else:
        labels = tuple(labels)
        if len(labels) != n:
            raise SchemaViolationError(
                f"{len(labels)} labels for a {n}x{n} table", "$.labels"
            )
    out = arr.copy()
    out.flags.writeable = False
    return FiniteMetricSpace(labels=labels, dist=out)


def load_metric_space(source) -> FiniteMetricSpace:
    """Load and validate a metric space from a JSON file path or dict."""
    if isinstance(source, str):
        with open(source) as fh:
            doc = json.load(fh)
    else:
        doc = source
    if not isinstance(doc, dict):
        raise SchemaViolationError("document must be a JSON object")
    if "dist" not in doc:
        raise SchemaViolationError("missing key 'dist'", "$.dist")
    dist = doc["dist"]
    if not isinstance(dist, list) or not all(isinstance(r, list) for r in dist):
        raise SchemaViolationError("'dist' must be a list of rows", "$.dist")
    labels = doc.get("labels")
    if labels is not None and not isinstance(labels, list):
        raise SchemaViolationError("'labels' must be a list", "$.labels")
    return validate_metric(dist, labels)


def two_point_space(d: float = 1.0) -> FiniteMetricSpace:
    return validate_metric([[0.0, d], [d, 0.0]], labels=("u", "v"))


def snowflake(space: FiniteMetricSpace, alpha: float) -> FiniteMetricSpace:
    """Raise every distance to the power alpha, 0 < alpha <= 1.

    Concavity of t^alpha preserves the triangle inequality, so the
    result is again a metric space.
    """
    if not (0 < alpha <= 1):
        raise AlphaOutOfRangeError(f"alpha must be in (0, 1], got {alpha}")
    out = np.power(space.dist, alpha)
    out.flags.writeable = False
    return FiniteMetricSpace(labels=space.labels, dist=out)


def torus_space(domain: TorusDomain, budget: int = 1 << 16) -> FiniteMetricSpace:
    """Materialize Z_m^n with its word metric as a FiniteMetricSpace."""
    domain.require_points(budget)
    pts = domain.coords()
    diff = np.abs(pts[:, None, :] - pts[None, :, :])
    dist = np.minimum(diff, domain.m - diff).max(axis=2).astype(np.float64)
    dist.flags.writeable = False
    labels = tuple(",".join(map(str, p)) for p in pts)
    return FiniteMetricSpace(labels=labels, dist=dist)


def grid_points(n: int, m: int) -> np.ndarray:
    """All points of {0,...,m}^n as an ((m+1)^n, n) array, row-major."""
    grids = np.indices(((m + 1),) * n).reshape(n, (m + 1) ** n)
    return grids.T.copy()


def points_space(points: np.ndarray, p: float, labels=None,
                 block: int = 256) -> FiniteMetricSpace:
    """Finite metric space of vectors under the l_p norm, built blockwise.

    Complex coordinates are allowed; differences are measured by modulus.
    """
    pts = np.asarray(points)
    if not np.iscomplexobj(pts):
        pts = pts.astype(np.float64)
    n = pts.shape[0]
    dist = np.empty((n, n), dtype=np.float64)
    for lo in range(0, n, block):
        hi = min(lo + block, n)
        diff = np.abs(pts[lo:hi, None, :] - pts[None, :, :])
        if math.isinf(p):
            dist[lo:hi] = diff.max(axis=2)
        else:
            dist[lo:hi] = np.power(np.power(diff, p).sum(axis=2), 1.0 / p)
    dist[np.diag_indices(n)] = 0.0
    dist.flags.writeable = False
    if labels is None:
        labels = tuple(str(i) for i in range(n))
    return FiniteMetricSpace(labels=tuple(labels), dist=dist)


DIAG_BFS_BUDGET = 10**6


def diag_distance(domain: TorusDomain, x, y,
                  budget: int = DIAG_BFS_BUDGET) -> int:
    """Graph distance on Z_m^n where a step moves every coordinate by +/-1.

    Breadth-first search; requires even m. Points whose coordinate
    differences have mixed parity are unreachable.
    """
    if domain.m % 2 != 0:
        raise OddMError(f"even side length required, got m={domain.m}")
    domain.require_points(budget)
    xs = np.mod(np.asarray(x, dtype=np.int64), domain.m)
    ys = np.mod(np.asarray(y, dtype=np.int64), domain.m)
    if xs.shape != (domain.n,) or ys.shape != (domain.n,):
        raise DimensionMismatchError(
            f"points must have shape ({domain.n},), got {xs.shape} {ys.shape}"
        )
    par = np.mod(ys - xs, 2)
    if par.size and int(par.min()) != int(par.max()):
        raise UnreachableError(
            f"{tuple(int(v) for v in xs)} and {tuple(int(v) for v in ys)} "
            "lie in different parity classes"
        )
    start = int(np.ravel_multi_index(tuple(xs), domain.shape))
    goal = int(np.ravel_multi_index(tuple(ys), domain.shape))
    if start == goal:
        return 0
    deltas = np.array(list(itertools.product((-1, 1), repeat=domain.n)),
                      dtype=np.int64)
    visited = np.zeros(domain.points, dtype=bool)
    visited[start] = True
    frontier = np.array([start], dtype=np.int64)
    depth = 0
    while frontier.size:
        depth += 1
        coords = np.stack(np.unravel_index(frontier, domain.shape), axis=1)
        nbrs = np.mod(coords[None, :, :] + deltas[:, None, :], domain.m)
        idx = np.ravel_multi_index(
            tuple(nbrs.reshape(-1, domain.n).T), domain.shape
        )
        idx = np.unique(idx[~visited[idx]])
        if idx.size == 0:
            break
        if goal in idx:
            return depth
        visited[idx] = True
        frontier = idx
    raise UnreachableError(
        f"no diagonal path joins the given points in Z_{domain.m}^{domain.n}"
    )


@dataclass(frozen=True)
class EmbeddingRecord:
    """Outcome of measuring a map between finite metric spaces."""

    source_size: int
    target_size: int
    mapping: np.ndarray  # (source_size,) target indices
    lip: float  # largest expansion ratio
    colip: float  # largest contraction ratio (inverse map on the image)
    distortion: float
    lip_pair: tuple = ()
    colip_pair: tuple = ()

    def to_json_dict(self) -> dict:
        return {
            "source_size": self.source_size,
            "target_size": self.target_size,
            "mapping": [int(v) for v in self.mapping],
            "lip": self.lip,
            "colip": self.colip,
            "distortion": self.distortion,
            "lip_pair": list(self.lip_pair),
            "colip_pair": list(self.colip_pair),
        }


def distortion(mapping, source: FiniteMetricSpace,
               target: FiniteMetricSpace, block: int = 256) -> EmbeddingRecord:
    """Measure lip, colip, and distortion of an injective map.

    mapping[i] is the target index of source point i. Raises
    NotInjectiveError on a collision, witnessed by the colliding pair.
    """
    f = np.asarray(mapping, dtype=np.int64)
    ns = source.size
    if f.shape != (ns,):
        raise DimensionMismatchError(
            f"mapping must have shape ({ns},), got {f.shape}"
        )
    if ns and (f.min() < 0 or f.max() >= target.size):
        raise PreconditionViolationError(
            "mapping contains an out-of-range target index"
        )
    order = np.argsort(f, kind="stable")
    fs = f[order]
    dup = np.flatnonzero(fs[1:] == fs[:-1])
    if dup.size:
        a, b = int(order[dup[0]]), int(order[dup[0] + 1])
        raise NotInjectiveError(
            f"source points {a} and {b} share target index {int(f[a])}",
            pair=(a, b),
        )
    if ns < 2:
        return EmbeddingRecord(ns, target.size, f, 1.0, 1.0, 1.0)

    cols = np.arange(ns)
    lip, colip = -np.inf, -np.inf
    lip_pair = colip_pair = (0, 0)
    for lo in range(0, ns, block):
        hi = min(lo + block, ns)
        ds = source.dist[lo:hi, :].copy()
        dt = target.dist[f[lo:hi], :][:, f]
        keep = cols[None, :] > np.arange(lo, hi)[:, None]  # j > i only
        with np.errstate(invalid="ignore", divide="ignore"):
            up = np.where(keep, dt / ds, -np.inf)
            down = np.where(keep, ds / dt, -np.inf)
        k = int(np.argmax(up))
        if up.reshape(-1)[k] > lip:
            lip = float(up.reshape(-1)[k])
            i, j = np.unravel_index(k, up.shape)
            lip_pair = (int(i) + lo, int(j))
        k = int(np.argmax(down))
        if down.reshape(-1)[k] > colip:
            colip = float(down.reshape(-1)[k])
            i, j = np.unravel_index(k, down.shape)
            colip_pair = (int(i) + lo, int(j))
    return EmbeddingRecord(
        source_size=ns,
        target_size=target.size,
        mapping=f,
        lip=lip,
        colip=colip,
        distortion=lip * colip,
        lip_pair=lip_pair,
        colip_pair=colip_pair,
    )


@dataclass(frozen=True)
class ModuliTables:
    """Step functions bounding how a map stretches and compresses distances.

    expansion_at(t) is the largest target distance over source pairs at
    distance <= t; compression_at(t) the smallest over pairs at distance
    >= t (min over an empty set is +inf). Both are nondecreasing in t
    and sandwich every realized pair.
    """

    thresholds: np.ndarray  # distinct realized positive source distances, asc
    expansion: np.ndarray  # aligned prefix maxima of target distances
    compression: np.ndarray  # aligned suffix minima of target distances

    def expansion_at(self, t: float) -> float:
        if t < 0:
            return 0.0
        i = int(np.searchsorted(self.thresholds, t, side="right")) - 1
        return float(self.expansion[i]) if i >= 0 else 0.0

    def compression_at(self, t: float) -> float:
        if t <= 0:
            return 0.0
        i = int(np.searchsorted(self.thresholds, t, side="left"))
        if i >= len(self.thresholds):
            return math.inf
        return float(self.compression[i])

    def to_json_dict(self) -> dict:
        return {
            "thresholds": self.thresholds.tolist(),
            "expansion": self.expansion.tolist(),
            "compression": self.compression.tolist(),
        }


def moduli(mapping, source: FiniteMetricSpace,
           target: FiniteMetricSpace) -> ModuliTables:
    """Tabulate both moduli of a (not necessarily injective) map."""
    f = np.asarray(mapping, dtype=np.int64)
    ns = source.size
    if f.shape != (ns,):
        raise DimensionMismatchError(
            f"mapping must have shape ({ns},), got {f.shape}"
        )
    iu, ju = np.triu_indices(ns, k=1)
    ds = source.dist[iu, ju]
    dt = target.dist[f[iu], f[ju]]
    ts, inv = np.unique(ds, return_inverse=True)
    gmax = np.full(ts.shape, -np.inf)
    np.maximum.at(gmax, inv, dt)
    gmin = np.full(ts.shape, np.inf)
    np.minimum.at(gmin, inv, dt)
    expansion = np.maximum.accumulate(gmax)
    compression = np.minimum.accumulate(gmin[::-1])[::-1]
    return ModuliTables(
        thresholds=ts, expansion=expansion, compression=compression
    )
