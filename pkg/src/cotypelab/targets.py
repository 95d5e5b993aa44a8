"""Codomain abstractions: where function values live and how far apart they are.

Every functional in this package consumes distances through one of these
callbacks, so metric-space-valued and norm-valued witnesses share the
same evaluation paths.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    AlphaOutOfRangeError,
    DimensionMismatchError,
    SchemaViolationError,
)
from .spaces import FiniteMetricSpace


@dataclass(frozen=True)
class MetricTarget:
    """Values are integer indices into a finite metric space."""

    space: FiniteMetricSpace

    kind = "metric"

    def pairwise(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        ai = np.asarray(a, dtype=np.int64)
        bi = np.asarray(b, dtype=np.int64)
        return self.space.dist[ai, bi]


@dataclass(frozen=True)
class NormTarget:
    """Values are complex vectors measured in the l_p norm."""

    p: float
    dim: int = 0  # 0 means any dimension

    kind = "norm"

    def __post_init__(self):
        if not math.isinf(self.p) and self.p < 1:
            raise SchemaViolationError(f"norm exponent must be >= 1, got {self.p}")

    def norm(self, v: np.ndarray) -> np.ndarray:
        a = np.abs(np.asarray(v))
        if a.ndim == 0:
            return a
        if self.dim and a.shape[-1] != self.dim:
            raise DimensionMismatchError(
                f"expected vectors of dimension {self.dim}, got {a.shape[-1]}"
            )
        if math.isinf(self.p):
            return a.max(axis=-1)
        if self.p == 1:
            return a.sum(axis=-1)
        if self.p == 2:
            return np.sqrt((a * a).sum(axis=-1))
        return np.power(np.power(a, self.p).sum(axis=-1), 1.0 / self.p)

    def pairwise(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return self.norm(np.asarray(a) - np.asarray(b))


@dataclass(frozen=True)
class SnowflakeTarget:
    """Distances of a base target raised to a power alpha in (0, 1]."""

    base: object
    alpha: float

    kind = "snowflake"

    def __post_init__(self):
        if not (0 < self.alpha <= 1):
            raise AlphaOutOfRangeError(
                f"alpha must be in (0, 1], got {self.alpha}"
            )

    def pairwise(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return np.power(self.base.pairwise(a, b), self.alpha)


def as_target(space_or_norm):
    """Coerce a FiniteMetricSpace or an existing target into a target."""
    if isinstance(space_or_norm, FiniteMetricSpace):
        return MetricTarget(space_or_norm)
    if hasattr(space_or_norm, "pairwise"):
        return space_or_norm
    raise SchemaViolationError(
        f"cannot interpret {type(space_or_norm).__name__} as a codomain"
    )


def parse_norm_spec(spec: str) -> NormTarget:
    """Parse 'lp:<p>:<d>' into a NormTarget, e.g. 'lp:2:3' for l_2^3."""
    parts = spec.split(":")
    if len(parts) != 3 or parts[0] != "lp":
        raise SchemaViolationError(
            f"norm spec must look like 'lp:<p>:<d>', got {spec!r}"
        )
    p = math.inf if parts[1] in ("inf", "oo") else float(parts[1])
    try:
        d = int(parts[2])
    except ValueError:
        raise SchemaViolationError(f"bad dimension in norm spec {spec!r}")
    if d < 1:
        raise SchemaViolationError(f"dimension must be >= 1 in {spec!r}")
    return NormTarget(p=p, dim=d)
