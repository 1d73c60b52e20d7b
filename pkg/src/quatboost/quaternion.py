"""Quaternion arithmetic on numpy arrays and quaternion-valued 2-D fields.

A quaternion ``q = a + b i + c j + d k`` is stored as the last axis of a
float64 array, ``q[..., 0] = a`` through ``q[..., 3] = d``.  Every routine
broadcasts over the leading axes, so a field of shape ``(Ns, Nt, 4)`` is
multiplied by a scalar quaternion of shape ``(4,)`` without copies.

The Cayley-Dickson split writes ``q = z1 + j z2`` with complex ``z1, z2``.
Because ``j (c - d i) = c j + d k`` the split is ``z1 = a + b i`` and
``z2 = c - d i``.
"""

from dataclasses import dataclass

import numpy as np

__all__ = [
    "quat",
    "ONE",
    "I",
    "J",
    "K",
    "qmul",
    "qconj",
    "qnorm_sq",
    "qabs",
    "qinv",
    "cd_split",
    "cd_join",
    "QField2D",
    "make_grid",
    "field_inner",
    "field_norm_sq",
]


def quat(a=0.0, b=0.0, c=0.0, d=0.0):
    """Return the quaternion ``a + b i + c j + d k`` as a length-4 array."""
    return np.array([a, b, c, d], dtype=float)


ONE = quat(1.0)
I = quat(0.0, 1.0)
J = quat(0.0, 0.0, 1.0)
K = quat(0.0, 0.0, 0.0, 1.0)


def _as_quat(q):
    q = np.asarray(q, dtype=float)
    if q.shape[-1:] != (4,):
        raise ValueError(f"last axis must have length 4, got shape {q.shape}")
    return q


def qmul(q1, q2):
    """Hamilton product ``q1 q2``, broadcast over leading axes.

    Parameters
    ----------
    q1, q2 : array_like, shape (..., 4)

    Returns
    -------
    ndarray, shape (..., 4)
    """
    q1 = _as_quat(q1)
    q2 = _as_quat(q2)
    a1, b1, c1, d1 = np.moveaxis(q1, -1, 0)
    a2, b2, c2, d2 = np.moveaxis(q2, -1, 0)
    return np.stack(
        [
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            b1 * a2 + a1 * b2 + c1 * d2 - d1 * c2,
            a1 * c2 + c1 * a2 + d1 * b2 - b1 * d2,
            a1 * d2 + d1 * a2 + b1 * c2 - c1 * b2,
        ],
        axis=-1,
    )


def qconj(q):
    """Quaternion conjugate ``a - b i - c j - d k``."""
    q = _as_quat(q)
    out = -q
    out[..., 0] = q[..., 0]
    return out


def qnorm_sq(q):
    """Squared modulus ``a^2 + b^2 + c^2 + d^2``."""
    q = _as_quat(q)
    return np.einsum("...i,...i->...", q, q)


def qabs(q):
    """Modulus ``|q|``."""
    return np.sqrt(qnorm_sq(q))


def qinv(q):
    """Multiplicative inverse ``conj(q) / |q|^2``.

    Raises
    ------
    ZeroDivisionError
        If any entry is the zero quaternion.
    """
    q = _as_quat(q)
    n = qnorm_sq(q)
    if np.any(n == 0.0):
        raise ZeroDivisionError("zero quaternion has no inverse")
    return qconj(q) / n[..., None]


def cd_split(q):
    """Cayley-Dickson split ``q = z1 + j z2``.

    Returns
    -------
    z1, z2 : ndarray of complex128
        ``z1 = a + b i`` and ``z2 = c - d i``.
    """
    q = _as_quat(q)
    z1 = q[..., 0] + 1j * q[..., 1]
    z2 = q[..., 2] - 1j * q[..., 3]
    return z1, z2


def cd_join(z1, z2):
    """Inverse of :func:`cd_split`."""
    z1 = np.asarray(z1, dtype=complex)
    z2 = np.asarray(z2, dtype=complex)
    z1, z2 = np.broadcast_arrays(z1, z2)
    return np.stack([z1.real, z1.imag, z2.real, -z2.imag], axis=-1)


@dataclass(eq=False)
class QField2D:
    """Quaternion field sampled on a uniform 2-D grid.

    Parameters
    ----------
    values : ndarray, shape (Ns, Nt, 4)
        Samples; axis 0 runs over the space coordinate ``s``, axis 1 over
        the time coordinate ``t``.
    origin : tuple of float
        Physical coordinates ``(s0, t0)`` of sample ``(0, 0)``.
    step : tuple of float
        Grid spacings ``(ds, dt)``, both positive.
    """

    values: np.ndarray
    origin: tuple = (0.0, 0.0)
    step: tuple = (1.0, 1.0)

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 3 or values.shape[2] != 4:
            raise ValueError(f"values must have shape (Ns, Nt, 4), got {values.shape}")
        if values.shape[0] < 2 or values.shape[1] < 2:
            raise ValueError("grid must be at least 2 x 2")
        ds, dt = (float(x) for x in self.step)
        if not (np.isfinite(ds) and np.isfinite(dt) and ds > 0 and dt > 0):
            raise ValueError(f"grid steps must be finite and positive, got {self.step}")
        self.values = values
        self.origin = tuple(float(x) for x in self.origin)
        self.step = (ds, dt)

    @property
    def shape(self):
        return self.values.shape[:2]

    @property
    def cell_area(self):
        return self.step[0] * self.step[1]

    @property
    def axes(self):
        """Physical sample coordinates ``(s, t)`` as two 1-D arrays."""
        (ns, nt), (s0, t0), (ds, dt) = self.shape, self.origin, self.step
        return s0 + ds * np.arange(ns), t0 + dt * np.arange(nt)

    def meshgrid(self):
        s, t = self.axes
        return np.meshgrid(s, t, indexing="ij")

    def same_grid(self, other):
        return (
            self.shape == other.shape
            and np.allclose(self.origin, other.origin, rtol=0, atol=1e-12 * max(self.step))
            and np.allclose(self.step, other.step, rtol=1e-12, atol=0)
        )

    def with_values(self, values):
        """New field on the same grid."""
        return QField2D(values, self.origin, self.step)

    def split(self):
        """Cayley-Dickson components ``(f1, f2)`` as complex arrays."""
        return cd_split(self.values)

    def __add__(self, other):
        _check_same_grid(self, other)
        return self.with_values(self.values + other.values)

    def __sub__(self, other):
        _check_same_grid(self, other)
        return self.with_values(self.values - other.values)

    def __mul__(self, scalar):
        return self.with_values(self.values * float(scalar))

    __rmul__ = __mul__

    def lmul(self, q):
        """Left multiplication ``q F`` by a constant quaternion."""
        return self.with_values(qmul(np.asarray(q, dtype=float), self.values))

    def rmul(self, q):
        """Right multiplication ``F q`` by a constant quaternion."""
        return self.with_values(qmul(self.values, np.asarray(q, dtype=float)))


def make_grid(n, half_width, values=None):
    """Field on the square grid ``[-L, L)^2`` with ``n`` samples per axis.

    The origin sits at ``-L`` so that ``s = 0`` is the sample ``n // 2`` and
    the grid is registered with the periodic lattice used by convolutions.
    """
    step = 2.0 * half_width / n
    if values is None:
        values = np.zeros((n, n, 4))
    return QField2D(values, (-half_width, -half_width), (step, step))


def _check_same_grid(F, G):
    if not F.same_grid(G):
        raise ValueError("fields live on different grids")


def field_inner(F, G):
    """Quaternion inner product ``sum F conj(G) ds dt``.

    With ``F = f1 + j f2`` and ``G = g1 + j g2`` the integrand equals
    ``(f1 conj(g1) + conj(f2) g2) + j (f2 conj(g1) - conj(f1) g2)``; the scalar
    part of ``<F, F>`` is the squared norm.
    """
    _check_same_grid(F, G)
    prod = qmul(F.values, qconj(G.values))
    return prod.sum(axis=(0, 1)) * F.cell_area


def field_norm_sq(F):
    """Riemann sum of ``|f1|^2 + |f2|^2`` with cell area ``ds dt``."""
    return float(np.sum(F.values**2) * F.cell_area)
