"""Forward and inverse quaternion boostlet transform.

Coefficients are the left inner products

    C1(c, alpha, tau) = <F, Phi_{c,alpha,tau}>,    C2 = <F, Phi*_{c,alpha,tau}>,

with ``<F, G> = sum F conj(G) ds dt`` and translated atoms
``Phi_{c,alpha,tau}(mu) = Phi_{c,alpha,0}(mu - tau)``.  They are correlations
in ``tau``, so in the Cayley-Dickson spectral representation (see
:func:`quatboost.fourier.cd_spectrum`) each becomes a pointwise product with
the atom spectrum ``c Phi^(M_{c,alpha}^T w)``.  That is how every cell is
computed here; :func:`qbt_direct` evaluates the inner products literally as
a small-grid oracle.

Atoms are ``Phi = w phi`` where ``phi`` is the real, even window whose
spectrum is the mother profile and ``w`` is the system's constant window
quaternion, so ``phi1 = w1 phi`` and ``phi2 = w2 phi``.
"""

import json
import os
from dataclasses import dataclass

import numpy as np

from . import fourier
from .boostlets import Cone, bump_profile, hyperbolic_coords, meyer_profile
from .fourier import cd_inverse, cd_spectrum, negate_frequency
from .io import write_qf4
from .quaternion import QField2D, cd_join, field_norm_sq, qconj, qmul

__all__ = [
    "QBTCoefficients",
    "ScalarBTCoefficients",
    "SystemMismatchError",
    "forward_qbt",
    "inverse_qbt",
    "transform_energy",
    "plancherel_ratio",
    "coverage_fraction",
    "lattice_response",
    "qbt_cell",
    "qbt_direct",
    "qbt_convolution_path",
    "spatial_atom",
    "componentwise_scalar_bt",
    "inverse_scalar_bt",
    "scalar_sweep",
    "sweep",
    "reconstruct",
    "export_coefficients",
    "export_sweep",
]


class SystemMismatchError(ValueError):
    """Coefficients were produced by a different boostlet system."""


@dataclass(eq=False)
class QBTCoefficients:
    """Coefficients over the (scale, boost) lattice and the tau grid.

    ``c1[i, j]`` and ``c2[i, j]`` hold the near- and far-field channels at
    ``(c_lattice[i], alpha_lattice[j])`` as ``(Ns, Nt, 4)`` quaternion arrays
    on the grid of the analyzed signal.
    """

    c1: np.ndarray
    c2: np.ndarray
    system: object
    origin: tuple
    step: tuple

    @property
    def haar_weights(self):
        return self.system.haar_weights

    @property
    def cell_area(self):
        return self.step[0] * self.step[1]

    @property
    def tau_axes(self):
        return self.field(1, 0, 0).axes

    def field(self, channel, i, j):
        """Channel ``1`` or ``2`` at lattice cell ``(i, j)`` as a :class:`QField2D`."""
        arr = {1: self.c1, 2: self.c2}[channel]
        return QField2D(arr[i, j], self.origin, self.step)


@dataclass(eq=False)
class ScalarBTCoefficients:
    """Complex boostlet coefficients of a complex signal, near and far channels."""

    near: np.ndarray
    far: np.ndarray
    system: object
    origin: tuple
    step: tuple


class _Lattice:
    """Atom spectra of every lattice cell on one frequency grid."""

    def __init__(self, system, shape, step):
        self.system = system
        w1, w2 = fourier.frequency_axes(shape, step)
        W1, W2 = np.meshgrid(w1, w2, indexing="ij")
        code, rho, eta = hyperbolic_coords(W1, W2)
        self.near_mask = code == Cone.NEAR
        self.far_mask = code == Cone.FAR
        self.rho, self.eta = rho, eta
        self.cs = system.c_lattice
        self.alphas = system.alpha_lattice
        self.weights = system.haar_weights

    def profiles(self, c, alpha):
        """``(R_near, R_far)``, the mother spectra at ``M_{c,alpha}^T w`` (no factor c)."""
        s = self.system
        val = meyer_profile(c * self.rho, s.meyer_lo, s.meyer_hi)
        val = val * bump_profile(self.eta - alpha, s.bump_delta)
        rn = np.where(self.near_mask, val, 0.0)
        rf = np.where(self.far_mask, val, 0.0)
        # On even grids the Nyquist lines alias w and -w to different bins;
        # averaging keeps the sampled spectra even so spatial windows are real.
        return 0.5 * (rn + negate_frequency(rn)), 0.5 * (rf + negate_frequency(rf))

    def cells(self):
        for i, c in enumerate(self.cs):
            for j, a in enumerate(self.alphas):
                yield i, j, c, a


def _windowed_spectrum(F, system):
    """Spectrum pair ``(U1, U2)`` such that a cell's coefficient spectrum is ``c R U``.

    For an atom with components ``phi1 = w1 phi``, ``phi2 = w2 phi`` the
    correlation ``sum F(mu) conj(Phi(mu - tau))`` has Cayley-Dickson spectra
    ``f1^ conj(phi1^) + conj(f2^(-w)) phi2^(-w)`` and
    ``f2^ conj(phi1^) - conj(f1^(-w)) phi2^(-w)``; ``phi^`` is real and even.
    """
    f1, f2 = cd_spectrum(F)
    w1, w2 = system.window_cd
    if w2 == 0:
        return np.conj(w1) * f1, np.conj(w1) * f2
    u1 = np.conj(w1) * f1 + w2 * np.conj(negate_frequency(f2))
    u2 = np.conj(w1) * f2 - w2 * np.conj(negate_frequency(f1))
    return u1, u2


def _synthesis_spectrum(z1, z2, system):
    """Spectrum pair of ``sum_tau C(tau) Phi(mu - tau)``, before the factor ``c R``."""
    w1, w2 = system.window_cd
    if w2 == 0:
        return w1 * z1, w1 * z2
    s1 = w1 * z1 - w2 * np.conj(negate_frequency(z2))
    s2 = w2 * np.conj(negate_frequency(z1)) + w1 * z2
    return s1, s2


def _to_tau(z1_hat, z2_hat, origin, step):
    z1, z2 = cd_inverse(z1_hat, z2_hat, origin, step)
    return cd_join(z1, z2)


def sweep(F, system, on_cell=None):
    """Visit every lattice cell of the transform of ``F``.

    ``on_cell(i, j, c1, c2)`` receives the tau-domain channels of one cell as
    ``(Ns, Nt, 4)`` arrays; cells are visited in a fixed order.  Nothing is
    stored, so large lattices run in bounded memory.

    Returns
    -------
    float
        Transform energy ``sum w sum_tau (|C1|^2 + |C2|^2) ds dt``.
    """
    lat = _Lattice(system, F.shape, F.step)
    u1, u2 = _windowed_spectrum(F, system)
    energy = 0.0
    for i, j, c, a in lat.cells():
        rn, rf = lat.profiles(c, a)
        if not (rn.any() or rf.any()):
            if on_cell is not None:
                zero = np.zeros(F.values.shape)
                on_cell(i, j, zero, zero)
            continue
        c1 = _to_tau(c * rn * u1, c * rn * u2, F.origin, F.step)
        c2 = _to_tau(c * rf * u1, c * rf * u2, F.origin, F.step)
        energy += lat.weights[i, j] * (np.sum(c1**2) + np.sum(c2**2)) * F.cell_area
        if on_cell is not None:
            on_cell(i, j, c1, c2)
    return float(energy)


def forward_qbt(F, system):
    """Quaternion boostlet transform of ``F`` on the system lattice.

    Parameters
    ----------
    F : QField2D
    system : BoostletSystem
        Must have its admissibility constant computed.

    Returns
    -------
    QBTCoefficients
    """
    system.require_delta()
    shape = (system.n_c, system.n_alpha) + F.values.shape
    c1 = np.zeros(shape)
    c2 = np.zeros(shape)

    def store(i, j, a, b):
        c1[i, j] = a
        c2[i, j] = b

    sweep(F, system, store)
    return QBTCoefficients(c1, c2, system, F.origin, F.step)


class _Synthesizer:
    """Accumulates the synthesis spectrum cell by cell."""

    def __init__(self, system, shape, origin, step):
        self.system = system
        self.lat = _Lattice(system, shape, step)
        self.origin, self.step = origin, step
        self.acc1 = np.zeros(shape, dtype=complex)
        self.acc2 = np.zeros(shape, dtype=complex)

    def add(self, i, j, c1, c2):
        c = self.lat.cs[i]
        rn, rf = self.lat.profiles(c, self.lat.alphas[j])
        scale = self.lat.weights[i, j] * c
        for coef, r in ((c1, rn), (c2, rf)):
            if not r.any():
                continue
            h1, h2 = cd_spectrum(QField2D(coef, self.origin, self.step))
            s1, s2 = _synthesis_spectrum(h1, h2, self.system)
            self.acc1 += scale * r * s1
            self.acc2 += scale * r * s2

    def result(self):
        delta = self.system.require_delta()
        z1, z2 = cd_inverse(self.acc1 / delta, self.acc2 / delta, self.origin, self.step)
        return QField2D(cd_join(z1, z2), self.origin, self.step)


def inverse_qbt(coef, system):
    """Reconstruct ``F_R = (1/Delta) sum_{c,alpha} w [C1 * Phi + C2 * Phi*]``.

    Each channel is synthesized against its own atoms in the Cayley-Dickson
    spectral domain and the sum is divided by the cached admissibility
    constant.
    """
    if not coef.system.same_system(system):
        raise SystemMismatchError("coefficients were computed with a different system")
    syn = _Synthesizer(system, coef.c1.shape[2:4], coef.origin, coef.step)
    for i in range(system.n_c):
        for j in range(system.n_alpha):
            syn.add(i, j, coef.c1[i, j], coef.c2[i, j])
    return syn.result()


def reconstruct(F, system, transform_cell=None):
    """Forward transform, optional per-cell edit, and synthesis without storing coefficients.

    ``transform_cell(i, j, c1, c2)`` may return modified ``(c1, c2)``, e.g.
    after thresholding.  Returns ``(F_R, energy)``.
    """
    system.require_delta()
    syn = _Synthesizer(system, F.shape, F.origin, F.step)

    def visit(i, j, c1, c2):
        if transform_cell is not None:
            c1, c2 = transform_cell(i, j, c1, c2)
        syn.add(i, j, c1, c2)

    energy = sweep(F, system, visit)
    return syn.result(), energy


def transform_energy(coef):
    """Haar-weighted energy ``sum w sum_tau (|C1|^2 + |C2|^2) ds dt``."""
    per_cell = np.sum(coef.c1**2, axis=(2, 3, 4)) + np.sum(coef.c2**2, axis=(2, 3, 4))
    return float(np.sum(coef.haar_weights * per_cell) * coef.cell_area)


def plancherel_ratio(F, system):
    """``transform_energy / (Delta ||F||^2)``; 1 when the lattice covers the spectrum."""
    norm = field_norm_sq(F)
    if norm == 0:
        raise ValueError("Plancherel ratio undefined for the zero field")
    return sweep(F, system) / (system.require_delta() * norm)


def lattice_response(system, shape, step):
    """Discrete lattice sum ``D(w) = |w|^2 sum w_{c,alpha} c^2 (R_near^2 + R_far^2)``.

    Energy and perfect reconstruction both reduce to multiplication of the
    spectrum by ``D / Delta``.
    """
    lat = _Lattice(system, shape, step)
    out = np.zeros(shape)
    for i, j, c, a in lat.cells():
        rn, rf = lat.profiles(c, a)
        out += lat.weights[i, j] * c * c * (rn**2 + rf**2)
    return out * float(np.sum(np.array(system.window) ** 2))


def coverage_fraction(F, system):
    """Fraction of the spectral energy of ``F`` inside the union of atom supports."""
    f1, f2 = cd_spectrum(F)
    power = np.abs(f1) ** 2 + np.abs(f2) ** 2
    covered = lattice_response(system, F.shape, F.step) > 0
    total = power.sum()
    if total == 0:
        raise ValueError("coverage undefined for the zero field")
    return float(power[covered].sum() / total)


def qbt_cell(F, system, c, alpha):
    """Both channels at a single, arbitrary ``(c, alpha)`` as fields on the tau grid."""
    if not c > 0:
        raise ValueError(f"scale must be positive, got {c}")
    lat = _Lattice(system, F.shape, F.step)
    rn, rf = lat.profiles(c, alpha)
    u1, u2 = _windowed_spectrum(F, system)
    c1 = _to_tau(c * rn * u1, c * rn * u2, F.origin, F.step)
    c2 = _to_tau(c * rf * u1, c * rf * u2, F.origin, F.step)
    return QField2D(c1, F.origin, F.step), QField2D(c2, F.origin, F.step)


def spatial_atom(system, c, alpha, cone, grid):
    """Spatial atom ``Phi_{c,alpha,0}`` (or its far-field companion) sampled on ``grid``.

    Obtained by inverting the atom spectrum ``c Phi^(M^T w)``; the samples sit
    at the physical grid coordinates.
    """
    lat = _Lattice(system, grid.shape, grid.step)
    rn, rf = lat.profiles(c, alpha)
    r = rn if Cone(cone) == Cone.NEAR else rf
    w1, w2 = system.window_cd
    p1, p2 = cd_inverse(c * r * w1, c * r * w2, grid.origin, grid.step)
    return QField2D(cd_join(p1, p2), grid.origin, grid.step)


def _offsets(F):
    k = np.round(np.asarray(F.origin) / np.asarray(F.step)).astype(int)
    if not np.allclose(k * np.asarray(F.step), F.origin, atol=1e-9 * max(F.step)):
        raise ValueError("the direct evaluation needs a registered grid (origin/step integral)")
    return tuple(k)


def qbt_direct(F, system, c, alpha):
    """Literal inner products ``<F, Phi_{c,alpha,tau}>`` for every ``tau``; O(N^4)."""
    k1, k2 = _offsets(F)
    n1, n2 = F.shape
    out = []
    for cone in (Cone.NEAR, Cone.FAR):
        atom = spatial_atom(system, c, alpha, cone, F).values
        res = np.empty(F.values.shape)
        m1 = np.arange(n1)
        m2 = np.arange(n2)
        for a in range(n1):
            rows = (m1 - a - k1) % n1
            for b in range(n2):
                cols = (m2 - b - k2) % n2
                shifted = atom[rows][:, cols]
                res[a, b] = qmul(F.values, qconj(shifted)).sum(axis=(0, 1))
        out.append(F.with_values(res * F.cell_area))
    return tuple(out)


def qbt_convolution_path(F, system, c, alpha):
    """Coefficients as quaternion convolutions ``F (*) rev(tilde Phi)``.

    With ``Phi = phi1 + j phi2`` the kernel is ``conj(rev(phi1)) - j phi2``.
    This agrees with the inner products when ``phi2 = 0``.
    """
    offsets = _offsets(F)
    out = []
    for cone in (Cone.NEAR, Cone.FAR):
        atom = spatial_atom(system, c, alpha, cone, F)
        p1, p2 = atom.split()
        kernel = F.with_values(cd_join(fourier.reverse(np.conj(p1), offsets), -p2))
        out.append(fourier.qconvolve(F, kernel))
    return tuple(out)


def _scalar_window(system):
    w1, w2 = system.window_cd
    if w2 != 0:
        raise ValueError("componentwise transform needs a window with phi2 = 0")
    return w1


def _complex_spectrum(z, origin, step):
    f1, _ = cd_spectrum(QField2D(cd_join(z, np.zeros_like(z)), origin, step))
    return f1


def scalar_sweep(z, origin, step, system, on_cell=None):
    """Scalar boostlet transform of one complex component, cell by cell.

    ``on_cell(i, j, near, far)`` receives complex tau-domain arrays.  The
    window is ``phi1 = w1 phi``; a window with a ``j`` part is refused.
    Returns the Haar-weighted energy of the coefficients.
    """
    w1 = _scalar_window(system)
    lat = _Lattice(system, z.shape, step)
    zh = np.conj(w1) * _complex_spectrum(z, origin, step)
    area = step[0] * step[1]
    energy = 0.0
    for i, j, c, a in lat.cells():
        rn, rf = lat.profiles(c, a)
        near, far = cd_inverse(c * rn * zh, c * rf * zh, origin, step)
        energy += lat.weights[i, j] * (np.sum(np.abs(near) ** 2) + np.sum(np.abs(far) ** 2)) * area
        if on_cell is not None:
            on_cell(i, j, near, far)
    return float(energy)


class _ScalarSynthesizer:
    def __init__(self, system, shape, origin, step):
        self.w1 = _scalar_window(system)
        self.system = system
        self.lat = _Lattice(system, shape, step)
        self.origin, self.step = origin, step
        self.acc = np.zeros(shape, dtype=complex)

    def add(self, i, j, near, far):
        c = self.lat.cs[i]
        rn, rf = self.lat.profiles(c, self.lat.alphas[j])
        scale = self.lat.weights[i, j] * c * self.w1
        for z, r in ((near, rn), (far, rf)):
            if r.any():
                self.acc += scale * r * _complex_spectrum(z, self.origin, self.step)

    def result(self):
        delta = self.system.require_delta()
        z, _ = cd_inverse(self.acc / delta, np.zeros_like(self.acc), self.origin, self.step)
        return z


def componentwise_scalar_bt(F, system):
    """Scalar boostlet transforms of the Cayley-Dickson components ``f1`` and ``f2``.

    Each component is analyzed separately with the complex window
    ``phi1 = w1 phi``.  Returns a pair of :class:`ScalarBTCoefficients`.
    """
    _scalar_window(system)
    system.require_delta()
    out = []
    for z in F.split():
        near = np.zeros((system.n_c, system.n_alpha) + F.shape, dtype=complex)
        far = np.zeros_like(near)

        def store(i, j, a, b):
            near[i, j] = a
            far[i, j] = b

        scalar_sweep(z, F.origin, F.step, system, store)
        out.append(ScalarBTCoefficients(near, far, system, F.origin, F.step))
    return tuple(out)


def inverse_scalar_bt(coef, system):
    """Synthesis for one complex component: ``(1/Delta) sum w [B_near * phi + B_far * phi*]``."""
    if not coef.system.same_system(system):
        raise SystemMismatchError("coefficients were computed with a different system")
    syn = _ScalarSynthesizer(system, coef.near.shape[2:], coef.origin, coef.step)
    for i in range(system.n_c):
        for j in range(system.n_alpha):
            syn.add(i, j, coef.near[i, j], coef.far[i, j])
    return syn.result()


def _write_manifest(out_dir, system, files, energy, coverage):
    manifest = {
        "system": system.params(),
        "c_lattice": system.c_lattice.tolist(),
        "alpha_lattice": system.alpha_lattice.tolist(),
        "haar_weights": system.haar_weights.tolist(),
        "delta": system.delta_const,
        "delta_spread": system.delta_spread,
        "coverage": coverage,
        "energy": energy,
        "files": files,
    }
    path = os.path.join(out_dir, "manifest.json")
    with open(path, "w") as fh:
        json.dump(manifest, fh, indent=2)
    return path


def _cell_name(ch, i, j):
    return f"c{ch}_{i:03d}_{j:03d}.qf4"


def export_coefficients(coef, out_dir, F=None):
    """Write one QF4 file per (channel, c, alpha) and a JSON manifest."""
    os.makedirs(out_dir, exist_ok=True)
    system = coef.system
    files = []
    for ch in (1, 2):
        for i in range(system.n_c):
            for j in range(system.n_alpha):
                files.append(_cell_name(ch, i, j))
                write_qf4(os.path.join(out_dir, files[-1]), coef.field(ch, i, j))
    coverage = None if F is None else coverage_fraction(F, system)
    return _write_manifest(out_dir, system, sorted(files), transform_energy(coef), coverage)


def export_sweep(F, system, out_dir):
    """Transform ``F`` and write each cell as it is computed; same layout as
    :func:`export_coefficients` without holding the full coefficient array."""
    os.makedirs(out_dir, exist_ok=True)
    files = []

    def write(i, j, c1, c2):
        for ch, c in ((1, c1), (2, c2)):
            files.append(_cell_name(ch, i, j))
            field = QField2D(c, F.origin, F.step)
            write_qf4(os.path.join(out_dir, files[-1]), field)

    energy = sweep(F, system, write)
    return _write_manifest(out_dir, system, sorted(files), energy, coverage_fraction(F, system))
