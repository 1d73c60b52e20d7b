"""Two-sided quaternion Fourier transform and quaternion convolution.

The transform of a field ``F`` is

    F^(w) = sum_mu exp(-2 pi i w1 s) F(mu) exp(-2 pi j w2 t) ds dt

with the i-exponential on the left and the j-exponential on the right.  On a
grid with ``N`` samples and spacing ``h`` the frequencies are the usual
``fftfreq(N, h)`` lattice, so the kernel is sampled exactly.

Fast evaluation splits the two kernels.  Right multiplication by
``exp(j theta)`` acts as complex multiplication on the pair ``(P, Q)`` in
``q = P + i Q`` with ``P = a + c j`` and ``Q = b + d j``; left multiplication
by ``exp(i theta)`` acts on ``(A, B)`` in ``q = A + B j`` with ``A = a + b i``
and ``B = c + d i``.  Each pass is a single complex FFT along one axis, and
:func:`brute_force_qft` referees the result.
"""

from dataclasses import dataclass

import numpy as np

from .quaternion import QField2D, cd_join, qmul

__all__ = [
    "QSpectrum2D",
    "frequency_axes",
    "qft_forward",
    "qft_inverse",
    "brute_force_qft",
    "qconvolve",
    "reverse",
    "cd_spectrum",
    "cd_inverse",
    "negate_frequency",
]

BRUTE_FORCE_MAX = 32


@dataclass(eq=False)
class QSpectrum2D:
    """Quaternion spectrum on the frequency lattice of a spatial grid.

    ``values[p, r]`` is the spectrum at ``(freq_axes[0][p], freq_axes[1][r])``
    in FFT order (zero frequency first).  The spatial ``origin`` and
    ``spatial_step`` are kept so the spectrum can be inverted.
    """

    values: np.ndarray
    origin: tuple
    spatial_step: tuple

    @property
    def shape(self):
        return self.values.shape[:2]

    @property
    def freq_axes(self):
        return frequency_axes(self.shape, self.spatial_step)

    @property
    def step(self):
        (n1, n2), (ds, dt) = self.shape, self.spatial_step
        return 1.0 / (n1 * ds), 1.0 / (n2 * dt)

    @property
    def cell_area(self):
        d1, d2 = self.step
        return d1 * d2

    def meshgrid(self):
        w1, w2 = self.freq_axes
        return np.meshgrid(w1, w2, indexing="ij")


def frequency_axes(shape, step):
    """Lattice frequencies ``(w1, w2)`` for a grid of ``shape`` and ``step``."""
    return np.fft.fftfreq(shape[0], step[0]), np.fft.fftfreq(shape[1], step[1])


def _origin_phases(shape, origin, step):
    w1, w2 = frequency_axes(shape, step)
    return np.exp(-2j * np.pi * w1 * origin[0]), np.exp(-2j * np.pi * w2 * origin[1])


def qft_forward(F):
    """Two-sided quaternion Fourier transform of ``F``.

    Parameters
    ----------
    F : QField2D

    Returns
    -------
    QSpectrum2D
    """
    ph1, ph2 = _origin_phases(F.shape, F.origin, F.step)
    q = F.values
    # right j-kernel along t
    P = np.fft.fft(q[..., 0] + 1j * q[..., 2], axis=1) * ph2[None, :]
    Q = np.fft.fft(q[..., 1] + 1j * q[..., 3], axis=1) * ph2[None, :]
    # left i-kernel along s
    A = np.fft.fft(P.real + 1j * Q.real, axis=0) * ph1[:, None]
    B = np.fft.fft(P.imag + 1j * Q.imag, axis=0) * ph1[:, None]
    out = np.stack([A.real, A.imag, B.real, B.imag], axis=-1) * F.cell_area
    return QSpectrum2D(out, F.origin, F.step)


def qft_inverse(S):
    """Inverse of :func:`qft_forward`, returning a field on the original grid."""
    ph1, ph2 = _origin_phases(S.shape, S.origin, S.spatial_step)
    q = S.values
    A = np.fft.ifft((q[..., 0] + 1j * q[..., 1]) * ph1.conj()[:, None], axis=0)
    B = np.fft.ifft((q[..., 2] + 1j * q[..., 3]) * ph1.conj()[:, None], axis=0)
    P = np.fft.ifft((A.real + 1j * B.real) * ph2.conj()[None, :], axis=1)
    Q = np.fft.ifft((A.imag + 1j * B.imag) * ph2.conj()[None, :], axis=1)
    out = np.stack([P.real, Q.real, P.imag, Q.imag], axis=-1)
    ds, dt = S.spatial_step
    return QField2D(out / (ds * dt), S.origin, S.spatial_step)


def brute_force_qft(F):
    """Direct double sum of the two-sided transform using :func:`qmul`.

    Cost is O(N^4); grids larger than 32 x 32 are refused.
    """
    ns, nt = F.shape
    if ns > BRUTE_FORCE_MAX or nt > BRUTE_FORCE_MAX:
        raise ValueError(f"brute-force transform limited to {BRUTE_FORCE_MAX}^2 grids, got {F.shape}")
    s, t = F.axes
    w1, w2 = frequency_axes(F.shape, F.step)
    zeros_s = np.zeros_like(s)
    zeros_t = np.zeros_like(t)
    out = np.empty((ns, nt, 4))
    for r, v in enumerate(w2):
        th = -2.0 * np.pi * v * t
        right = np.stack([np.cos(th), zeros_t, np.sin(th), zeros_t], axis=-1)
        G = qmul(F.values, right[None, :, :]).sum(axis=1)
        for p, u in enumerate(w1):
            th = -2.0 * np.pi * u * s
            left = np.stack([np.cos(th), np.sin(th), zeros_s, zeros_s], axis=-1)
            out[p, r] = qmul(left, G).sum(axis=0)
    return QSpectrum2D(out * F.cell_area, F.origin, F.step)


def _registration(F):
    """Integer offsets ``origin / step``; the grid must be registered."""
    k = np.asarray(F.origin) / np.asarray(F.step)
    kr = np.round(k)
    if np.any(np.abs(k - kr) > 1e-9):
        raise ValueError(
            "convolution on a periodic grid needs origin/step to be integers, "
            f"got {tuple(k)}"
        )
    return int(kr[0]), int(kr[1])


def reverse(z, offsets):
    """Coordinate reversal ``f(x) -> f(-x)`` on a registered periodic grid.

    Sample ``m`` sits at ``(K + m) h`` with ``K = offsets``; its mirror
    ``-(K + m) h`` is sample ``-m - 2K`` modulo the grid.
    """
    k1, k2 = offsets
    n1, n2 = z.shape[:2]
    i1 = (-np.arange(n1) - 2 * k1) % n1
    i2 = (-np.arange(n2) - 2 * k2) % n2
    return z[i1][:, i2]


def _circular_convolve(x, y, offsets, area):
    """``(x * y)(y_k) = sum_m x(x_m) y(y_k - x_m) area`` on a registered grid."""
    raw = np.fft.ifft2(np.fft.fft2(x) * np.fft.fft2(y))
    return np.roll(raw, offsets, axis=(0, 1)) * area


def qconvolve(F, G):
    """Quaternion convolution assembled from Cayley-Dickson components.

    With ``F = f1 + j f2`` and ``G = g1 + j g2``::

        F (*) G = [f1 * g1 - rev(conj f2) * g2] + j [rev(conj f1) * g2 + f2 * g1]

    where ``*`` is circular convolution in physical coordinates and ``rev``
    reflects through the physical origin.
    """
    if not F.same_grid(G):
        raise ValueError("qconvolve needs both fields on the same grid")
    offsets = _registration(F)
    area = F.cell_area
    f1, f2 = F.split()
    g1, g2 = G.split()
    conv = lambda x, y: _circular_convolve(x, y, offsets, area)  # noqa: E731
    z1 = conv(f1, g1) - conv(reverse(f2.conj(), offsets), g2)
    z2 = conv(reverse(f1.conj(), offsets), g2) + conv(f2, g1)
    return F.with_values(cd_join(z1, z2))


def cd_spectrum(F):
    """Complex spectra of the Cayley-Dickson components of ``F``.

    Each of ``f1`` and ``f2`` is transformed with the ordinary complex kernel
    ``exp(-2 pi i w . mu)``.  Correlations of ``F`` against quaternion
    windows become pointwise products in this representation.
    """
    f1, f2 = F.split()
    p1, p2 = _origin_phases(F.shape, F.origin, F.step)
    phase = p1[:, None] * p2[None, :] * F.cell_area
    return np.fft.fft2(f1) * phase, np.fft.fft2(f2) * phase


def cd_inverse(z1_hat, z2_hat, origin, step, axes=(-2, -1)):
    """Inverse of :func:`cd_spectrum` for arrays whose last two axes are the grid.

    Returns complex arrays ``(z1, z2)`` rather than a field so batched inputs
    can be handled.
    """
    shape = z1_hat.shape[-2:]
    p1, p2 = _origin_phases(shape, origin, step)
    phase = (p1[:, None] * p2[None, :]).conj() / (step[0] * step[1])
    return np.fft.ifft2(z1_hat * phase, axes=axes), np.fft.ifft2(z2_hat * phase, axes=axes)


def negate_frequency(z):
    """Evaluate a lattice spectrum at ``-w`` (last two axes)."""
    return np.roll(np.flip(z, axis=(-2, -1)), 1, axis=(-2, -1))
