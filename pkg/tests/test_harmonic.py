import numpy as np
import pytest

from cotypelab import (
    BudgetExceededError,
    CubeFunction,
    DimensionMismatchError,
    GridFunction,
    NormTarget,
    PreconditionViolationError,
    TorusDomain,
    avg_others,
    central_diff,
    edge_diff,
    fourier_forward,
    fourier_inverse,
    k_convexity_estimate,
    parseval_residual,
    projection_ratio,
    rad_identity_residual,
    rademacher_projection,
    roundtrip_residual,
    scale_of,
    sign_patterns,
    symbol_avg_others,
    symbol_central_diff,
    symbol_edge_diff,
    walsh_char,
)


def character(domain, k):
    return GridFunction.vector(domain, walsh_char(domain, k)[:, None])


def random_vector(domain, d, seed):
    rng = np.random.default_rng(seed)
    vals = rng.standard_normal((domain.points, d)) \
        + 1j * rng.standard_normal((domain.points, d))
    return GridFunction.vector(domain, vals)


def test_walsh_char_values():
    dom = TorusDomain(n=1, m=4)
    np.testing.assert_allclose(walsh_char(dom, [0]), np.ones(4))
    assert walsh_char(dom, [1], x=[1]) == pytest.approx(1j)
    assert walsh_char(dom, [1], x=[2]) == pytest.approx(-1)
    # frequencies reduce mod m
    np.testing.assert_allclose(walsh_char(dom, [5]), walsh_char(dom, [1]))
    with pytest.raises(DimensionMismatchError):
        walsh_char(dom, [1, 2])


def test_walsh_char_orthogonality():
    dom = TorusDomain(n=2, m=3)
    chars = np.stack([walsh_char(dom, k) for k in dom.coords()])
    gram = chars @ chars.conj().T / dom.points
    np.testing.assert_allclose(gram, np.eye(dom.points), atol=1e-12)


def test_transform_of_constant_and_character():
    dom = TorusDomain(n=2, m=4)
    const = GridFunction.vector(dom, np.full((16, 1), 2.0 + 0j))
    co = fourier_forward(const)
    assert co.coeff([0, 0])[0] == pytest.approx(2.0)
    assert np.abs(np.delete(co.coeffs, 0, axis=0)).max() < 1e-12

    f = character(dom, [1, 3])
    co = fourier_forward(f)
    assert co.coeff([1, 3])[0] == pytest.approx(1.0)
    mask = np.ones(16, dtype=bool)
    mask[dom.lin((1, 3))] = False
    assert np.abs(co.coeffs[mask]).max() < 1e-12


def test_transform_two_paths_agree():
    dom = TorusDomain(n=2, m=6)
    f = random_vector(dom, 3, seed=1)
    direct = fourier_forward(f, method="direct").coeffs
    fast = fourier_forward(f, method="fast").coeffs
    assert np.abs(direct - fast).max() < 1e-10
    with pytest.raises(PreconditionViolationError):
        fourier_forward(f, method="magic")


def test_roundtrip_and_parseval():
    dom = TorusDomain(n=3, m=4)
    f = random_vector(dom, 2, seed=2)
    assert roundtrip_residual(f) < 1e-12
    assert parseval_residual(f) < 1e-12
    back = fourier_inverse(fourier_forward(f))
    assert np.abs(back.values - f.values).max() < 1e-12


def test_spectral_records():
    dom = TorusDomain(n=1, m=4)
    co = fourier_forward(character(dom, [2]))
    recs = co.to_json_records()
    assert len(recs) == 4
    top = max(recs, key=lambda r: abs(complex(r["re"][0], r["im"][0])))
    assert top["k"] == [2]


def two_path_residual(f, op, symbol):
    # apply the operator pointwise, then again through its symbol
    spatial = op(f)
    co = fourier_forward(f)
    lifted = type(co)(domain=co.domain, coeffs=co.coeffs * symbol[:, None])
    spectral = fourier_inverse(lifted)
    return np.abs(spatial.values - spectral.values).max()


def test_central_diff_symbol_cases():
    dom = TorusDomain(n=1, m=4)
    f = character(dom, [1])
    got = central_diff(f, 0)
    # symbol at k=1, m=4 is 2i sin(pi/2) = 2i
    np.testing.assert_allclose(got.values, 2j * f.values, atol=1e-12)
    half = character(dom, [2])  # sin(pi) = 0
    assert np.abs(central_diff(half, 0).values).max() < 1e-12


def test_avg_others_cases():
    dom1 = TorusDomain(n=1, m=5)
    f = random_vector(dom1, 2, seed=3)
    # no other axes to average over
    np.testing.assert_array_equal(avg_others(f, 0).values, f.values)

    dom2 = TorusDomain(n=2, m=4)
    g = character(dom2, [1, 1])  # cos(pi/2) = 0 along the other axis
    assert np.abs(avg_others(g, 0).values).max() < 1e-12
    with pytest.raises(IndexError):
        avg_others(g, 2)


def test_edge_diff_validation():
    dom = TorusDomain(n=2, m=4)
    f = random_vector(dom, 1, seed=4)
    const = GridFunction.vector(dom, np.ones((16, 1), dtype=complex))
    assert np.abs(edge_diff(const, [1, -1]).values).max() == 0.0
    with pytest.raises(PreconditionViolationError):
        edge_diff(f, [2, 0])
    with pytest.raises(DimensionMismatchError):
        edge_diff(f, [1])


@pytest.mark.parametrize("n,m", [(1, 4), (2, 6), (3, 4)])
def test_operators_match_their_symbols(n, m):
    dom = TorusDomain(n=n, m=m)
    f = random_vector(dom, 2, seed=10 * n + m)
    for j in range(n):
        r = two_path_residual(f, lambda g, j=j: central_diff(g, j),
                              symbol_central_diff(dom, j))
        assert r < 1e-10
        r = two_path_residual(f, lambda g, j=j: avg_others(g, j),
                              symbol_avg_others(dom, j))
        assert r < 1e-10
    eps = np.resize([1, -1, 0], n)
    r = two_path_residual(f, lambda g: edge_diff(g, eps),
                          symbol_edge_diff(dom, eps))
    assert r < 1e-10


def test_edge_diff_symbol_formula():
    dom = TorusDomain(n=2, m=4)
    eps = np.array([1, 1])
    ks = dom.coords()
    want = np.exp(2j * np.pi * (ks @ eps) / 4) - 1.0
    np.testing.assert_allclose(symbol_edge_diff(dom, eps), want)


def test_grid_function_helpers():
    dom = TorusDomain(n=1, m=4)
    f = GridFunction.vector(dom, np.array([[3.0], [0], [0], [4]],
                                          dtype=complex))
    assert f.is_vector and f.dim == 1
    assert scale_of(f) == 4.0
    g = f.shifted([1])
    assert g.values[0, 0] == 0.0 and g.values[3, 0] == 3.0

    pts = GridFunction.points(dom, [0, 1, 1, 0])
    assert not pts.is_vector
    with pytest.raises(PreconditionViolationError):
        scale_of(pts)


def test_cube_function_make_and_norm():
    g = CubeFunction.make(2, [1.0, 1.0, 1.0, 1.0])
    assert g.values.shape == (4, 1)
    assert g.l2_norm() == pytest.approx(1.0)
    with pytest.raises(DimensionMismatchError):
        CubeFunction.make(2, [1.0, 2.0])


def test_rademacher_projection_fixed_points():
    n = 3
    signs = sign_patterns(n).astype(np.float64)
    a = np.array([2.0, -1.0, 0.5])
    degree_one = CubeFunction.make(n, signs @ a)
    proj = rademacher_projection(degree_one)
    np.testing.assert_allclose(proj.values, degree_one.values, atol=1e-12)

    const = CubeFunction.make(n, np.ones(2**n))
    assert np.abs(rademacher_projection(const).values).max() < 1e-12
    # products of two signs are killed as well
    quad = CubeFunction.make(n, signs[:, 0] * signs[:, 1])
    assert np.abs(rademacher_projection(quad).values).max() < 1e-12


def test_projection_identity_residual():
    for n, m in [(1, 4), (2, 6), (3, 4)]:
        f = random_vector(TorusDomain(n=n, m=m), 2, seed=n + m)
        assert rad_identity_residual(f) <= 1e-10 * scale_of(f)


def test_projection_identity_guards():
    dom = TorusDomain(n=2, m=4)
    pts = GridFunction.points(dom, np.zeros(16, dtype=np.int64))
    with pytest.raises(PreconditionViolationError):
        rad_identity_residual(pts)
    big = random_vector(TorusDomain(n=5, m=8), 32, seed=0)
    with pytest.raises(BudgetExceededError):
        rad_identity_residual(big)


def test_projection_ratio_hilbert_cap():
    # in l_2 the projection is orthogonal, so the ratio never exceeds 1
    rng = np.random.default_rng(7)
    norm = NormTarget(p=2.0)
    for _ in range(25):
        g = CubeFunction.make(3, rng.standard_normal((8, 2))
                              + 1j * rng.standard_normal((8, 2)))
        assert projection_ratio(g, norm) <= 1.0 + 1e-12
    zero = CubeFunction.make(2, np.zeros(4))
    assert projection_ratio(zero, NormTarget(p=1.0)) == 0.0


# hill-climbed l_1 witness on the 3-cube; the ratio above 1 shows the
# degree-one projection expands some function in this norm
L1_WITNESS = np.array([
    [-0.11427252492001984, -2.0980322717417104],
    [-0.8883054631547436, 0.0031516938658984264],
    [-2.060141747231875, -0.11161281374264191],
    [-1.3357708826304568, 0.0694217976968106],
    [1.032488177348221, -0.6170033778569147],
    [2.3670011986415975, 0.01829600643630891],
    [1.533577705853969, 0.0007941370262420124],
    [0.10599281408788937, 2.5120536250778316],
])
L1_WITNESS_RATIO = 1.1194553673101082


def test_l1_projection_witness_frozen_value():
    g = CubeFunction.make(3, L1_WITNESS)
    assert projection_ratio(g, NormTarget(p=1.0)) == \
        pytest.approx(L1_WITNESS_RATIO, rel=1e-12)


def test_l1_projection_witness_recomputed_plainly():
    # same ratio from scratch with explicit loops
    signs = sign_patterns(3)
    proj = np.zeros_like(L1_WITNESS)
    for j in range(3):
        cj = np.zeros(2)
        for row, e in enumerate(signs):
            cj += e[j] * L1_WITNESS[row]
        cj /= len(signs)
        for row, e in enumerate(signs):
            proj[row] += e[j] * cj
    num = np.sqrt(np.mean(np.abs(proj).sum(axis=1) ** 2))
    den = np.sqrt(np.mean(np.abs(L1_WITNESS).sum(axis=1) ** 2))
    assert num / den == pytest.approx(L1_WITNESS_RATIO, rel=1e-12)


def test_k_convexity_estimate_deterministic():
    norm = NormTarget(p=1.0)
    a = k_convexity_estimate(norm, n=2, trials=20, seed=9, dim=2)
    b = k_convexity_estimate(norm, n=2, trials=20, seed=9, dim=2)
    assert a.best_ratio == b.best_ratio
    assert a.best_ratio > 0
    np.testing.assert_array_equal(a.witness, b.witness)
    d = a.to_json_dict()
    assert d["n"] == 2 and d["trials"] == 20
