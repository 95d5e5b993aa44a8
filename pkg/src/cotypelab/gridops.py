"""Shift machinery and sign-pattern tables for functions on Z_m^n."""
from __future__ import annotations

import itertools

import numpy as np

from .spaces import TorusDomain


def roll_values(domain: TorusDomain, values: np.ndarray, shift) -> np.ndarray:
    """Values of x -> f(x + shift) given the value table of f.

    values has shape (m^n,) or (m^n, d); shift is an n-vector of integers
    (entries may be negative or exceed m).
    """
    s = np.asarray(shift, dtype=np.int64)
    if s.shape != (domain.n,):
        s = np.broadcast_to(s, (domain.n,))
    vec = values.ndim == 2
    shape = domain.shape + ((values.shape[1],) if vec else ())
    grid = values.reshape(shape)
    rolled = np.roll(grid, tuple(-int(v) for v in s), axis=tuple(range(domain.n)))
    return rolled.reshape(values.shape)


def axis_shift(domain: TorusDomain, j: int, amount: int = 1) -> np.ndarray:
    """The shift vector amount * e_j (0-based axis j)."""
    if not 0 <= j < domain.n:
        raise IndexError(f"axis {j} out of range for n={domain.n}")
    s = np.zeros(domain.n, dtype=np.int64)
    s[j] = amount
    return s


def sign_patterns(n: int) -> np.ndarray:
    """All of {-1, 1}^n as a (2^n, n) array, row-major from (-1,...,-1)."""
    return np.array(list(itertools.product((-1, 1), repeat=n)), dtype=np.int64)


def three_patterns(n: int) -> np.ndarray:
    """All of {-1, 0, 1}^n as a (3^n, n) array, row-major."""
    return np.array(list(itertools.product((-1, 0, 1), repeat=n)),
                    dtype=np.int64)


def random_vector_values(domain: TorusDomain, d: int,
                         rng: np.random.Generator) -> np.ndarray:
    """Standard complex Gaussian value table of shape (m^n, d)."""
    shape = (domain.points, d)
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_point_values(domain: TorusDomain, size: int,
                        rng: np.random.Generator) -> np.ndarray:
    """Uniform codomain indices of shape (m^n,)."""
    return rng.integers(0, size, size=domain.points, dtype=np.int64)
