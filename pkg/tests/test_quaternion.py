import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from quatboost.quaternion import (
    I,
    J,
    K,
    ONE,
    QField2D,
    cd_join,
    cd_split,
    field_inner,
    field_norm_sq,
    make_grid,
    qabs,
    qconj,
    qinv,
    qmul,
    qnorm_sq,
    quat,
)
from quatboost.signals import make_gaussian_packet, reference_packet

finite = st.floats(-1e3, 1e3, allow_nan=False)
quats = arrays(np.float64, 4, elements=finite)


def left_matrix(q):
    """Real 4x4 matrix of p -> q p, written out independently of qmul."""
    a, b, c, d = q
    return np.array([[a, -b, -c, -d], [b, a, -d, c], [c, d, a, -b], [d, -c, b, a]])


@pytest.fixture
def rng():
    return np.random.default_rng(7)


def test_basis_products():
    assert np.array_equal(qmul(I, J), K)
    assert np.array_equal(qmul(J, I), -K)
    assert np.array_equal(qmul(J, K), I)
    assert np.array_equal(qmul(K, I), J)
    for u in (I, J, K):
        assert np.array_equal(qmul(u, u), -ONE)
    assert np.array_equal(qmul(qmul(I, J), K), -ONE)


def test_product_against_matrix_oracle(rng):
    p, q = quat(1, 2, 3, 4), quat(5, 6, 7, 8)
    assert np.allclose(qmul(p, q), left_matrix(p) @ q, rtol=0, atol=0)
    assert np.array_equal(qmul(p, q), quat(-60, 12, 30, 24))
    ps, qs = rng.normal(size=(1000, 4)), rng.normal(size=(1000, 4))
    expected = np.einsum("nij,nj->ni", np.array([left_matrix(x) for x in ps]), qs)
    assert np.allclose(qmul(ps, qs), expected, rtol=0, atol=1e-12)


def test_identity_and_zero(rng):
    q = rng.normal(size=(20, 4))
    assert np.array_equal(qmul(ONE, q), q)
    assert np.array_equal(qmul(q, ONE), q)
    assert qnorm_sq(quat()) == 0


def test_associativity_over_random_triples(rng):
    a, b, c = (rng.normal(size=(1000, 4)) for _ in range(3))
    assert np.max(np.abs(qmul(qmul(a, b), c) - qmul(a, qmul(b, c)))) <= 1e-12 * 10


def test_conjugation(rng):
    assert np.array_equal(qconj(quat(1, 1, 1, 1)), quat(1, -1, -1, -1))
    p, q = rng.normal(size=(1000, 4)), rng.normal(size=(1000, 4))
    assert np.array_equal(qconj(qconj(p)), p)
    assert np.max(np.abs(qconj(qmul(p, q)) - qmul(qconj(q), qconj(p)))) <= 1e-12


def test_norm_multiplicative(rng):
    p, q = rng.normal(size=(1000, 4)), rng.normal(size=(1000, 4))
    lhs = qnorm_sq(qmul(p, q))
    rhs = qnorm_sq(p) * qnorm_sq(q)
    assert np.max(np.abs(lhs / rhs - 1)) <= 1e-12
    assert qnorm_sq(qmul(I, J)) == 1
    assert np.allclose(qnorm_sq(p), qmul(p, qconj(p))[:, 0])


def test_inverse(rng):
    assert np.array_equal(qinv(J), -J)
    assert np.array_equal(qinv(quat(2)), quat(0.5))
    dirs = rng.normal(size=(1000, 4))
    q = dirs / qabs(dirs)[:, None] * rng.uniform(0.1, 10, size=(1000, 1))
    assert np.max(np.abs(qmul(q, qinv(q)) - ONE)) <= 1e-12
    assert np.max(np.abs(qmul(qinv(q), q) - ONE)) <= 1e-12
    with pytest.raises(ZeroDivisionError):
        qinv(quat())


@settings(max_examples=200, deadline=None)
@given(quats, quats)
def test_norm_multiplicative_property(p, q):
    np.testing.assert_allclose(qnorm_sq(qmul(p, q)), qnorm_sq(p) * qnorm_sq(q), rtol=1e-12, atol=1e-300)


def test_cayley_dickson_split():
    z1, z2 = cd_split(quat(1, 2, 3, 4))
    assert z1 == 1 + 2j and z2 == 3 - 4j
    z1, z2 = cd_split(J)
    assert z1 == 0 and z2 == 1


@settings(max_examples=200, deadline=None)
@given(arrays(np.float64, (3, 4), elements=finite))
def test_cd_round_trip(q):
    assert np.array_equal(cd_join(*cd_split(q)), q)


def test_cd_split_matches_product_form(rng):
    # q = z1 + j z2 with z1, z2 embedded as a + b i
    q = rng.normal(size=(50, 4))
    z1, z2 = cd_split(q)
    emb = lambda z: np.stack([z.real, z.imag, 0 * z.real, 0 * z.real], axis=-1)
    assert np.allclose(emb(z1) + qmul(J, emb(z2)), q, atol=1e-15)


def test_field_validation():
    with pytest.raises(ValueError):
        QField2D(np.zeros((1, 4, 4)), (0, 0), (1, 1))
    with pytest.raises(ValueError):
        QField2D(np.zeros((4, 4, 4)), (0, 0), (0, 1))
    with pytest.raises(ValueError):
        QField2D(np.zeros((4, 4, 3)), (0, 0), (1, 1))


def test_inner_product(rng):
    F = make_grid(16, 2.0, rng.normal(size=(16, 16, 4)))
    G = make_grid(16, 2.0, rng.normal(size=(16, 16, 4)))
    ff = field_inner(F, F)
    assert ff[0] == pytest.approx(field_norm_sq(F), rel=1e-14)
    assert np.allclose(ff[1:], 0, atol=1e-12)
    assert np.array_equal(field_inner(F, make_grid(16, 2.0)), np.zeros(4))
    p = rng.normal(size=4)
    assert np.allclose(field_inner(F.lmul(p), G), qmul(p, field_inner(F, G)), atol=1e-12)
    with pytest.raises(ValueError):
        field_inner(F, make_grid(8, 2.0))


def test_inner_product_constant_field():
    # unit cells on a 5 x 4 grid: area 20, |1 + j|^2 = 2
    F = QField2D(np.tile(quat(1, 0, 1, 0), (5, 4, 1)), (0.0, 0.0), (1.0, 1.0))
    assert field_inner(F, F)[0] == pytest.approx(40.0)


def test_inner_product_cd_expansion(rng):
    F = make_grid(8, 1.0, rng.normal(size=(8, 8, 4)))
    G = make_grid(8, 1.0, rng.normal(size=(8, 8, 4)))
    f1, f2 = F.split()
    g1, g2 = G.split()
    s1 = np.sum(f1 * np.conj(g1) + np.conj(f2) * g2) * F.cell_area
    s2 = np.sum(f2 * np.conj(g1) - np.conj(f1) * g2) * F.cell_area
    assert np.allclose(field_inner(F, G), cd_join(s1, s2), atol=1e-12)


def test_norms_of_reference_signals():
    grid = make_grid(128, 4.0)
    F = make_gaussian_packet(reference_packet(), grid)
    assert field_norm_sq(F) == pytest.approx(1.0, rel=0.01)
    s, t = grid.meshgrid()
    g = np.zeros(grid.values.shape)
    g[..., 0] = np.exp(-np.pi * (s**2 + t**2))
    assert field_norm_sq(grid.with_values(g)) == pytest.approx(0.5, rel=0.005)
    assert field_norm_sq(grid) == 0


def test_field_arithmetic(rng):
    F = make_grid(8, 1.0, rng.normal(size=(8, 8, 4)))
    assert np.array_equal((F + F).values, (2 * F).values)
    assert np.array_equal((F - F).values, np.zeros_like(F.values))
    q = rng.normal(size=4)
    assert np.allclose(F.rmul(q).values, qmul(F.values, q))
    s, t = F.axes
    assert s[0] == -1.0 and s[4] == 0.0 and np.allclose(np.diff(t), 0.25)
