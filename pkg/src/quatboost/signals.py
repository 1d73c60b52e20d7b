"""Test signals: modulated Gaussian packets, noise, and a sparsity count."""

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .quaternion import field_norm_sq, make_grid, qmul, quat

__all__ = [
    "PacketSpec",
    "make_gaussian_packet",
    "reference_packet",
    "benchmark_packets",
    "make_two_packet_signal",
    "generator_suite",
    "add_quaternion_noise",
    "sparsity_ratio",
    "RNG_NAME",
]

RNG_NAME = "numpy PCG64 (numpy.random.Generator.standard_normal)"


@dataclass
class PacketSpec:
    """Packet ``a exp(-pi |mu - centre|^2 / sigma^2) exp(i 2 pi (k s - w t)) q``.

    ``coupling`` is the quaternion ``q`` multiplied on the right.
    """

    amplitude: float = 1.0
    centre: tuple = (0.0, 0.0)
    sigma: float = 1.0
    k: float = 2.0
    omega: float = 1.8
    coupling: tuple = field(default=(1.0, 0.0, 1.0, 0.0))

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValueError("packet width sigma must be positive")
        if not np.any(np.asarray(self.coupling, dtype=float)):
            raise ValueError("coupling quaternion must be nonzero")


def make_gaussian_packet(packet, grid):
    """Sample a :class:`PacketSpec` on the grid of the field ``grid``.

    Warns when the grid does not extend four widths around the centre.
    """
    s, t = grid.meshgrid()
    s0, t0 = packet.centre
    (smin, smax), (tmin, tmax) = (s.min(), s.max()), (t.min(), t.max())
    reach = 4 * packet.sigma / math.sqrt(2 * math.pi)
    if s0 - reach < smin or s0 + reach > smax or t0 - reach < tmin or t0 + reach > tmax:
        warnings.warn("grid does not cover four widths around the packet centre", stacklevel=2)
    env = packet.amplitude * np.exp(-math.pi * ((s - s0) ** 2 + (t - t0) ** 2) / packet.sigma**2)
    phase = 2 * math.pi * (packet.k * s - packet.omega * t)
    carrier = np.stack([env * np.cos(phase), env * np.sin(phase), 0 * env, 0 * env], axis=-1)
    return grid.with_values(qmul(carrier, np.asarray(packet.coupling, dtype=float)))


def reference_packet(omega=1.8):
    """Unit-width packet with ``k = 2`` and coupling ``1 + j``; its squared norm is 1."""
    return PacketSpec(1.0, (0.0, 0.0), 1.0, 2.0, omega, tuple(quat(1, 0, 1, 0)))


def benchmark_packets(a2=0.6):
    """The two co-propagating packets with couplings ``1 + 0.8 j`` and ``1 + 1.2 j``."""
    return [
        PacketSpec(1.0, (1.0, 1.0), 0.5, 2.0, 1.8, tuple(quat(1, 0, 0.8, 0))),
        PacketSpec(a2, (-1.0, -1.0), 0.5, -2.0, -1.8, tuple(quat(1, 0, 1.2, 0))),
    ]


def make_two_packet_signal(n=256, half_width=4.0, packets=None):
    """Noise-free superposition of the two benchmark packets on ``[-L, L)^2``."""
    grid = make_grid(n, half_width)
    packets = benchmark_packets() if packets is None else packets
    values = np.zeros(grid.values.shape)
    for p in packets:
        if p.amplitude != 0:
            values += make_gaussian_packet(p, grid).values
    return grid.with_values(values)


def generator_suite():
    """Packets with varied width, direction and coupling, all off the light cone.

    On the default lattice over ``[-4, 4)^2`` each keeps at least 99% of its
    spectral energy inside the atom supports.
    """
    return [
        PacketSpec(1.0, (0.0, 0.0), 1.0, 2.0, 0.5, (1.0, 0.0, 1.0, 0.0)),
        PacketSpec(1.0, (0.5, -0.5), 0.8, 1.5, -0.4, (1.0, 0.0, 0.8, 0.0)),
        PacketSpec(1.0, (0.0, 0.0), 1.2, 0.5, 2.0, (1.0, 0.5, 0.0, 0.3)),
        PacketSpec(1.0, (0.0, 0.0), 1.5, 1.2, 0.0, (1.0, 0.0, 1.2, 0.0)),
        PacketSpec(1.0, (0.0, 0.0), 0.7, 0.3, 1.8, (1.0, -1.0, 0.5, 0.2)),
    ]


def add_quaternion_noise(F, snr_db, seed):
    """Add i.i.d. Gaussian noise to all four components at an exact realized SNR.

    The draw uses :data:`RNG_NAME` seeded with ``seed`` and is rescaled so that
    ``10 log10(||F||^2 / ||noise||^2) = snr_db``.  ``snr_db = inf`` returns a
    copy of ``F``.
    """
    norm = field_norm_sq(F)
    if norm == 0:
        raise ValueError("cannot set an SNR for the zero field")
    if math.isinf(snr_db) and snr_db > 0:
        return F.with_values(F.values.copy())
    rng = np.random.Generator(np.random.PCG64(seed))
    noise = rng.standard_normal(F.values.shape)
    target = norm / 10 ** (snr_db / 10)
    noise *= math.sqrt(target / (np.sum(noise**2) * F.cell_area))
    return F.with_values(F.values + noise)


def sparsity_ratio(coef_magnitudes, threshold_frac=0.05, total=None):
    """Count magnitudes above ``threshold_frac`` times the largest one.

    Parameters
    ----------
    coef_magnitudes : array_like
    threshold_frac : float in (0, 1)
    total : int, optional
        Denominator; defaults to the number of entries.

    Returns
    -------
    count, total, ratio : int, int, float
    """
    mags = np.abs(np.asarray(coef_magnitudes, dtype=float)).ravel()
    if mags.size == 0:
        raise ValueError("sparsity ratio of an empty array")
    if not 0 < threshold_frac < 1:
        raise ValueError("threshold fraction must lie in (0, 1)")
    count = int(np.count_nonzero(mags > threshold_frac * mags.max()))
    total = mags.size if total is None else int(total)
    return count, total, count / total
