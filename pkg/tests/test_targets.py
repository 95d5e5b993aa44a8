import math

import numpy as np
import pytest

from cotypelab import (
    AlphaOutOfRangeError,
    DimensionMismatchError,
    MetricTarget,
    NormTarget,
    SchemaViolationError,
    SnowflakeTarget,
    TorusDomain,
    as_target,
    parse_norm_spec,
    torus_space,
    two_point_space,
)


def test_metric_target_pairwise():
    t = MetricTarget(two_point_space(3.0))
    got = t.pairwise(np.array([0, 0, 1]), np.array([0, 1, 1]))
    np.testing.assert_array_equal(got, [0.0, 3.0, 0.0])
    assert t.kind == "metric"


@pytest.mark.parametrize("p,want", [
    (1.0, 7.0),
    (2.0, 5.0),
    (math.inf, 4.0),
    (3.0, (3 ** 3 + 4 ** 3) ** (1 / 3)),
])
def test_norm_target_exponents(p, want):
    t = NormTarget(p=p)
    assert t.norm(np.array([3.0, -4.0])) == pytest.approx(want)


def test_norm_target_pairwise_and_complex():
    t = NormTarget(p=2.0)
    a = np.array([[1 + 1j, 0], [0, 0]])
    b = np.array([[0, 0], [0, 3j]])
    got = t.pairwise(a, b)
    np.testing.assert_allclose(got, [math.sqrt(2), 3.0])


def test_norm_target_dim_enforcement():
    t = NormTarget(p=2.0, dim=3)
    t.norm(np.zeros((5, 3)))  # matches, fine
    with pytest.raises(DimensionMismatchError):
        t.norm(np.zeros((5, 2)))
    with pytest.raises(SchemaViolationError):
        NormTarget(p=0.5)


def test_snowflake_target():
    base = NormTarget(p=1.0)
    t = SnowflakeTarget(base=base, alpha=0.5)
    got = t.pairwise(np.array([[4.0]]), np.array([[0.0]]))
    np.testing.assert_allclose(got, [2.0])
    with pytest.raises(AlphaOutOfRangeError):
        SnowflakeTarget(base=base, alpha=2.0)


def test_as_target_coercion():
    sp = torus_space(TorusDomain(n=1, m=4))
    assert isinstance(as_target(sp), MetricTarget)
    nt = NormTarget(p=2.0)
    assert as_target(nt) is nt
    with pytest.raises(SchemaViolationError):
        as_target(42)


def test_parse_norm_spec():
    t = parse_norm_spec("lp:2:3")
    assert (t.p, t.dim) == (2.0, 3)
    assert math.isinf(parse_norm_spec("lp:inf:1").p)
    assert math.isinf(parse_norm_spec("lp:oo:2").p)
    for bad in ("l2:2:3", "lp:2", "lp:2:x", "lp:2:0"):
        with pytest.raises(SchemaViolationError):
            parse_norm_spec(bad)
