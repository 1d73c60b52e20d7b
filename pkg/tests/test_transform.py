import json

import numpy as np
import pytest

from quatboost.boostlets import BoostletSystem, Cone, NotCalibratedError, hyperbolic_coords
from quatboost.fourier import cd_inverse, cd_spectrum, qft_forward
from quatboost.io import read_qf4
from quatboost.quaternion import QField2D, cd_join, field_norm_sq, make_grid, qmul, quat
from quatboost.signals import PacketSpec, make_gaussian_packet, reference_packet
from quatboost.transform import (
    SystemMismatchError,
    componentwise_scalar_bt,
    coverage_fraction,
    export_coefficients,
    export_sweep,
    forward_qbt,
    inverse_qbt,
    inverse_scalar_bt,
    lattice_response,
    plancherel_ratio,
    qbt_cell,
    qbt_convolution_path,
    qbt_direct,
    reconstruct,
    spatial_atom,
    sweep,
    transform_energy,
)


def rel(a, b):
    return np.linalg.norm(np.asarray(a) - np.asarray(b)) / np.linalg.norm(np.asarray(b))


def small_system(**kw):
    params = dict(c_min=0.5, c_max=2.0, n_c=3, alpha_max=1.0, n_alpha=3)
    params.update(kw)
    return BoostletSystem(**params).calibrate()


def random_field(rng, n=16, half_width=2.0):
    return make_grid(n, half_width, rng.normal(size=(n, n, 4)))


def bandlimited(rng, n=64, half_width=4.0, rho=(0.7, 1.6), eta=1.0):
    """Random field whose spectrum lives in a region covered by the default lattice."""
    grid = make_grid(n, half_width)
    W1, W2 = qft_forward(grid).meshgrid()
    cone, r, e = hyperbolic_coords(W1, W2)
    m = (cone != Cone.LIGHT) & (r > rho[0]) & (r < rho[1]) & (np.abs(e) < eta)
    z1 = (rng.normal(size=m.shape) + 1j * rng.normal(size=m.shape)) * m
    z2 = (rng.normal(size=m.shape) + 1j * rng.normal(size=m.shape)) * m
    return grid.with_values(cd_join(*cd_inverse(z1, z2, grid.origin, grid.step)))


@pytest.fixture
def rng():
    return np.random.default_rng(2024)


@pytest.fixture(scope="module")
def default_system():
    return BoostletSystem().calibrate()


def test_frequency_path_matches_direct_inner_products(rng):
    F = random_field(rng)
    system = small_system()
    coef = forward_qbt(F, system)
    for i, c in enumerate(system.c_lattice):
        for j, a in enumerate(system.alpha_lattice):
            d1, d2 = qbt_direct(F, system, c, a)
            assert rel(coef.c1[i, j], d1.values) <= 1e-8
            assert rel(coef.c2[i, j], d2.values) <= 1e-8


def test_quaternion_window_matches_direct(rng):
    F = random_field(rng)
    system = small_system(window=(0.8, 0.5, 0.7, -0.3))
    for c, a in [(0.5, -1.0), (1.0, 0.0), (2.0, 1.0)]:
        f1, f2 = qbt_cell(F, system, c, a)
        d1, d2 = qbt_direct(F, system, c, a)
        assert rel(f1.values, d1.values) <= 1e-8
        assert rel(f2.values, d2.values) <= 1e-8


def test_convolution_path_real_window(rng):
    F = random_field(rng)
    system = small_system()
    for c, a in [(0.5, -1.0), (1.0, 0.5), (2.0, 1.0)]:
        v1, v2 = qbt_convolution_path(F, system, c, a)
        d1, d2 = qbt_direct(F, system, c, a)
        assert rel(v1.values, d1.values) <= 1e-8
        assert rel(v2.values, d2.values) <= 1e-8


def test_convolution_path_breaks_for_quaternion_window(rng):
    # with phi2 != 0 the convolution form no longer equals the inner products
    F = random_field(rng)
    system = small_system(window=(1.0, 0.0, 0.6, 0.2))
    v1, _ = qbt_convolution_path(F, system, 1.0, 0.0)
    d1, _ = qbt_direct(F, system, 1.0, 0.0)
    assert rel(v1.values, d1.values) > 0.1


def test_cell_matches_lattice(rng):
    F = random_field(rng)
    system = small_system()
    coef = forward_qbt(F, system)
    f1, f2 = qbt_cell(F, system, system.c_lattice[2], system.alpha_lattice[0])
    assert np.allclose(f1.values, coef.c1[2, 0]) and np.allclose(f2.values, coef.c2[2, 0])
    with pytest.raises(ValueError):
        qbt_cell(F, system, -1.0, 0.0)


def test_spatial_atoms_are_real_for_real_window():
    system = small_system()
    grid = make_grid(32, 4.0)
    for cone in (Cone.NEAR, Cone.FAR):
        atom = spatial_atom(system, 1.0, 0.3, cone, grid).values
        assert np.max(np.abs(atom[..., 1:])) <= 1e-12 * np.max(np.abs(atom))
        assert np.max(np.abs(atom[..., 0])) > 0


def test_zero_field_and_zero_coefficients():
    system = small_system()
    F = make_grid(16, 2.0)
    coef = forward_qbt(F, system)
    assert not coef.c1.any() and not coef.c2.any()
    assert transform_energy(coef) == 0
    assert not inverse_qbt(coef, system).values.any()
    with pytest.raises(ValueError):
        plancherel_ratio(F, system)


def test_requires_calibration(rng):
    with pytest.raises(NotCalibratedError):
        forward_qbt(random_field(rng), BoostletSystem(n_c=3, n_alpha=3))


def test_quaternion_linearity(rng):
    system = small_system()
    F, G = random_field(rng), random_field(rng)
    p, q = rng.normal(size=4), rng.normal(size=4)
    lhs = forward_qbt(F.lmul(p) + G.lmul(q), system)
    a, b = forward_qbt(F, system), forward_qbt(G, system)
    assert rel(lhs.c1, qmul(p, a.c1) + qmul(q, b.c1)) <= 1e-10
    assert rel(lhs.c2, qmul(p, a.c2) + qmul(q, b.c2)) <= 1e-10


def test_translation_covariance(rng):
    system = small_system()
    F = random_field(rng)
    k = (3, -5)
    shifted = F.with_values(np.roll(F.values, k, axis=(0, 1)))
    a, b = forward_qbt(F, system), forward_qbt(shifted, system)
    assert np.allclose(b.c1, np.roll(a.c1, k, axis=(2, 3)), rtol=0, atol=1e-12)
    assert np.allclose(b.c2, np.roll(a.c2, k, axis=(2, 3)), rtol=0, atol=1e-12)


def test_energy_homogeneity(rng):
    system = small_system()
    F = random_field(rng)
    e = transform_energy(forward_qbt(F, system))
    assert transform_energy(forward_qbt(F * 2.0, system)) == pytest.approx(4 * e, rel=1e-12)
    assert sweep(F, system) == pytest.approx(e, rel=1e-12)
    for p in (3.0, -0.5):
        scaled = small_system(window=(p, 0.0, 0.0, 0.0))
        assert sweep(F, scaled) == pytest.approx(p * p * e, rel=1e-12)
    q = quat(0.3, -1.0, 0.4, 0.8)
    assert sweep(F, small_system(window=tuple(q))) == pytest.approx(float(q @ q) * e, rel=1e-10)


def test_scaling_covariance():
    # F_a(mu) = F(mu / a)  =>  QB F_a(c, alpha, tau) = a QB F(c / a, alpha, tau / a).
    # On the periodic grid, reading QB F_a at tau = a tau' only sees every
    # a-th frequency of QB F, which folds the reference onto half the domain.
    a, n = 2.0, 128
    grid = make_grid(n, 8.0)
    F = make_gaussian_packet(PacketSpec(1.0, (0.0, 0.0), 0.5, 2.0, 1.2), grid)
    Fa = make_gaussian_packet(PacketSpec(1.0, (0.0, 0.0), 0.5 * a, 2.0 / a, 1.2 / a), grid)
    system = BoostletSystem().calibrate()
    eta = np.arctanh(-0.6)
    idx = np.arange(n // 4, 3 * n // 4)
    for c, alpha in [(1.25, eta), (1.6, eta - 0.2)]:
        lhs, _ = qbt_cell(Fa, system, c, alpha)
        ref, _ = qbt_cell(F, system, c / a, alpha)
        R = ref.values
        folded = sum(np.roll(R, (p * n // 2, q * n // 2), axis=(0, 1)) for p in (0, 1) for q in (0, 1))
        wide = lhs.values[np.ix_(2 * idx - n // 2, 2 * idx - n // 2)]
        assert rel(wide, a * folded[np.ix_(idx, idx)]) <= 0.02


def test_energy_matches_lattice_response(rng):
    # energy = sum_w D(w) |F^(w)|^2 dw, an independent Parseval route
    system = small_system()
    F = random_field(rng)
    f1, f2 = cd_spectrum(F)
    S = qft_forward(F)
    D = lattice_response(system, F.shape, F.step)
    expected = np.sum(D * (np.abs(f1) ** 2 + np.abs(f2) ** 2)) * S.cell_area
    assert sweep(F, system) == pytest.approx(expected, rel=1e-10)


def test_plancherel_bandlimited(rng, default_system):
    F = bandlimited(rng)
    assert coverage_fraction(F, default_system) == pytest.approx(1.0, abs=1e-12)
    assert plancherel_ratio(F, default_system) == pytest.approx(1.0, abs=0.03)


def test_plancherel_drops_outside_coverage(default_system):
    # spectrum near |w| = 16, beyond the smallest scale's reach
    F = make_gaussian_packet(PacketSpec(1.0, (0.0, 0.0), 1.0, 12.0, 4.0), make_grid(128, 2.0))
    assert coverage_fraction(F, default_system) < 0.5
    assert plancherel_ratio(F, default_system) < 0.5


def test_round_trip_bandlimited_wide_lattice():
    F = bandlimited(np.random.default_rng(0))
    system = BoostletSystem(c_min=0.1, c_max=10.0, n_c=80, alpha_max=4.0, n_alpha=80).calibrate()
    FR, energy = reconstruct(F, system)
    assert rel(FR.values, F.values) <= 0.01
    assert energy / (system.delta_const * field_norm_sq(F)) == pytest.approx(1.0, abs=0.01)


def test_inverse_matches_streaming_reconstruction(rng):
    system = small_system()
    F = random_field(rng)
    a = inverse_qbt(forward_qbt(F, system), system)
    b, _ = reconstruct(F, system)
    assert np.allclose(a.values, b.values, atol=1e-12)


def test_inverse_with_quaternion_window_is_self_consistent():
    # synthesis of a covered signal recovers it for any window quaternion
    F = bandlimited(np.random.default_rng(1))
    system = BoostletSystem(c_min=0.1, c_max=10.0, n_c=80, alpha_max=4.0, n_alpha=80, window=(0.6, 0.2, 0.7, -0.3))
    FR, _ = reconstruct(F, system.calibrate())
    assert rel(FR.values, F.values) <= 0.01


def test_inverse_system_mismatch(rng):
    F = random_field(rng)
    coef = forward_qbt(F, small_system())
    with pytest.raises(SystemMismatchError):
        inverse_qbt(coef, small_system(n_c=4))


def test_componentwise_matches_joint_channels(rng):
    system = small_system()
    F = random_field(rng)
    b1, b2 = componentwise_scalar_bt(F, system)
    coef = forward_qbt(F, system)
    assert rel(coef.c1, cd_join(b1.near, b2.near)) <= 1e-8
    assert rel(coef.c2, cd_join(b1.far, b2.far)) <= 1e-8
    # pure complex input: the j part of both channels vanishes
    f1, _ = F.split()
    G = F.with_values(cd_join(f1, 0 * f1))
    g1, g2 = componentwise_scalar_bt(G, system)
    joint = forward_qbt(G, system)
    assert rel(joint.c1, cd_join(g1.near, 0 * g1.near)) <= 1e-8
    assert not g2.near.any() and not g2.far.any()


def test_componentwise_bookkeeping_and_errors(rng):
    system = small_system()
    F = random_field(rng)
    b1, b2 = componentwise_scalar_bt(F, system)
    per_component = b1.near.size + b1.far.size
    assert per_component == 2 * system.n_c * system.n_alpha * F.shape[0] * F.shape[1]
    zero = componentwise_scalar_bt(make_grid(16, 2.0), system)
    assert not any(z.near.any() or z.far.any() for z in zero)
    with pytest.raises(ValueError):
        componentwise_scalar_bt(F, small_system(window=(1, 0, 1, 0)))


def test_componentwise_inverse_matches_joint(rng):
    system = small_system()
    F = random_field(rng)
    parts = [inverse_scalar_bt(b, system) for b in componentwise_scalar_bt(F, system)]
    joint, _ = reconstruct(F, system)
    assert np.allclose(cd_join(*parts), joint.values, atol=1e-12)


def test_coverage_of_reference_packet(default_system):
    F = make_gaussian_packet(reference_packet(), make_grid(64, 4.0))
    cov = coverage_fraction(F, default_system)
    assert 0.5 < cov < 1.0


def test_export_layouts_agree(tmp_path, rng):
    system = small_system()
    F = random_field(rng)
    m1 = export_coefficients(forward_qbt(F, system), tmp_path / "a", F)
    m2 = export_sweep(F, system, tmp_path / "b")
    j1, j2 = json.load(open(m1)), json.load(open(m2))
    assert j1["files"] == j2["files"] and len(j1["files"]) == 2 * 9
    assert j1["energy"] == pytest.approx(j2["energy"], rel=1e-12)
    assert j1["delta"] == system.delta_const
    for name in ("c1_000_000.qf4", "c2_002_001.qf4"):
        a, b = read_qf4(tmp_path / "a" / name), read_qf4(tmp_path / "b" / name)
        assert isinstance(a, QField2D) and np.array_equal(a.values, b.values)
