"""Hyperbolic frequency coordinates, boostlet profiles and atom spectra.

Frequencies with ``w1^2 > w2^2`` form the near-field cone and are written
``(w1, w2) = +-rho (cosh eta, sinh eta)``; the far-field cone ``w1^2 < w2^2``
uses the dual chart ``(w1, w2) = +-rho (sinh phi, cosh phi)``.  The matrix
``M_{c,alpha}^T`` acts as ``rho -> c rho`` and ``eta -> eta - alpha`` in
either chart, so an atom's spectrum is the mother profile
``psi(c rho) b(eta - alpha)`` restricted to its cone.  Both half-cones
(``+-w``) are covered, which keeps every atom spectrum even and every
spatial atom real.
"""

import enum
import functools
import math
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy import integrate

from .quaternion import cd_split, qnorm_sq

__all__ = [
    "Cone",
    "ConeCoords",
    "classify_cone",
    "hyperbolic_coords",
    "meyer_profile",
    "bump_profile",
    "dilation_boost",
    "BoostletSystem",
    "NotCalibratedError",
    "LightConeError",
    "atom_spectrum",
    "admissibility_delta",
    "delta_substituted",
    "default_probes",
    "load_config",
]

LIGHT_CONE_RTOL = 1e-12


class Cone(enum.IntEnum):
    LIGHT = 0
    NEAR = 1
    FAR = 2


class NotCalibratedError(RuntimeError):
    """The admissibility constant of a system has not been computed."""


class LightConeError(ValueError):
    """A probe frequency lies on the light cone ``|w1| = |w2|``."""


@dataclass(frozen=True)
class ConeCoords:
    cone: Cone
    rho: float
    eta: float


def hyperbolic_coords(w1, w2):
    """Vectorized cone classification.

    Returns
    -------
    cone : ndarray of int8
        Values of :class:`Cone`.
    rho, eta : ndarray
        Hyperbolic radius and rapidity in the chart of the cone (``eta`` is
        the dual rapidity ``phi`` on the far cone); both are 0 on the light
        cone.
    """
    w1 = np.asarray(w1, dtype=float)
    w2 = np.asarray(w2, dtype=float)
    a1, a2 = np.abs(w1), np.abs(w2)
    light = np.abs(a1 - a2) <= LIGHT_CONE_RTOL * np.maximum(a1, a2)
    near = (a1 > a2) & ~light
    far = (a2 > a1) & ~light
    cone = np.where(near, Cone.NEAR, np.where(far, Cone.FAR, Cone.LIGHT)).astype(np.int8)
    rho = np.sqrt(np.abs(a1 - a2) * (a1 + a2))
    with np.errstate(divide="ignore", invalid="ignore"):
        eta = np.where(near, np.arctanh(w2 / np.where(near, w1, 1.0)), 0.0)
        eta = np.where(far, np.arctanh(w1 / np.where(far, w2, 1.0)), eta)
    rho = np.where(light, 0.0, rho)
    return cone, rho, eta


def classify_cone(w1, w2):
    """Cone tag and hyperbolic coordinates of a single frequency."""
    cone, rho, eta = hyperbolic_coords(w1, w2)
    return ConeCoords(Cone(int(cone)), float(rho), float(eta))


def _nu(x):
    # clipped so rounding near x = 1 cannot push cos(pi/2 nu) below zero
    return np.clip(x**4 * (35.0 - 84.0 * x + 70.0 * x**2 - 20.0 * x**3), 0.0, 1.0)


def _meyer_raw(u, lo, hi):
    u = np.asarray(u, dtype=float)
    peak = math.sqrt(lo * hi)
    out = np.zeros_like(u)
    rise = (u > lo) & (u <= peak)
    fall = (u > peak) & (u < hi)
    out[rise] = np.sin(0.5 * np.pi * _nu((u[rise] - lo) / (peak - lo)))
    out[fall] = np.cos(0.5 * np.pi * _nu((u[fall] - peak) / (hi - peak)))
    return out


@functools.lru_cache(maxsize=None)
def _meyer_norm(lo, hi):
    peak = math.sqrt(lo * hi)
    f = lambda u: float(_meyer_raw(np.array([u]), lo, hi)[0]) ** 2 / u  # noqa: E731
    val = integrate.quad(f, lo, peak, epsabs=0, epsrel=1e-13, limit=200)[0]
    val += integrate.quad(f, peak, hi, epsabs=0, epsrel=1e-13, limit=200)[0]
    return math.sqrt(val)


def meyer_profile(u, lo=0.5, hi=2.0):
    """Meyer-type radial profile supported on ``[lo, hi]``.

    The rising edge ``sin(pi/2 nu(x))`` and falling edge ``cos(pi/2 nu(x))``
    use the Meyer polynomial ``nu(x) = x^4 (35 - 84x + 70x^2 - 20x^3)`` and meet
    with zero slope at ``sqrt(lo hi)`` (1 for the default band).  The result
    is scaled so that ``int psi(u)^2 du / u = 1``.
    """
    scalar = np.ndim(u) == 0
    out = _meyer_raw(np.atleast_1d(u), float(lo), float(hi)) / _meyer_norm(float(lo), float(hi))
    return float(out[0]) if scalar else out


@functools.lru_cache(maxsize=None)
def _bump_norm(delta):
    f = lambda x: math.exp(-2.0 / (1.0 - x * x)) if abs(x) < 1 else 0.0  # noqa: E731
    val = integrate.quad(f, -1.0, 1.0, epsabs=0, epsrel=1e-13, limit=200)[0]
    return math.sqrt(0.5 * delta * val)


def bump_profile(theta, delta=0.5):
    """Even bump ``exp(-1 / (1 - (2 theta / delta)^2))`` with unit L2 norm.

    Zero for ``|theta| >= delta / 2``.
    """
    if not delta > 0:
        raise ValueError(f"bump width must be positive, got {delta}")
    scalar = np.ndim(theta) == 0
    x = 2.0 * np.atleast_1d(np.asarray(theta, dtype=float)) / delta
    out = np.zeros_like(x)
    inside = np.abs(x) < 1.0
    out[inside] = np.exp(-1.0 / (1.0 - x[inside] ** 2))
    out /= _bump_norm(float(delta))
    return float(out[0]) if scalar else out


def dilation_boost(c, alpha):
    """The matrix ``M_{c,alpha}``, isotropic dilation by ``c`` composed with a boost.

    It is symmetric, and ``M^T (rho cosh eta, rho sinh eta) =
    c rho (cosh(eta - alpha), sinh(eta - alpha))``.
    """
    ch, sh = math.cosh(alpha), math.sinh(alpha)
    return c * np.array([[ch, -sh], [-sh, ch]])


@dataclass
class BoostletSystem:
    """Boostlet parameters, the (c, alpha) lattice and the admissibility constant.

    Parameters
    ----------
    meyer_lo, meyer_hi : float
        Support of the radial profile.
    bump_delta : float
        Full width of the rapidity bump.
    c_min, c_max, n_c : float, float, int
        Geometric scale lattice.
    alpha_max, n_alpha : float, int
        Uniform boost lattice on ``[-alpha_max, alpha_max]``.
    window : array_like of 4 floats
        Constant quaternion multiplying the real mother window.  The default
        ``1`` gives a real window (``phi2 = 0``).
    """

    meyer_lo: float = 0.5
    meyer_hi: float = 2.0
    bump_delta: float = 0.5
    c_min: float = 0.3
    c_max: float = 3.0
    n_c: int = 20
    alpha_max: float = 2.0
    n_alpha: int = 20
    window: tuple = (1.0, 0.0, 0.0, 0.0)
    delta_const: float = field(default=None, compare=False)
    delta_spread: float = field(default=None, compare=False)

    def __post_init__(self):
        self.window = tuple(float(x) for x in self.window)
        if len(self.window) != 4 or qnorm_sq(np.array(self.window)) == 0:
            raise ValueError("window must be a nonzero quaternion")
        if not 0 < self.meyer_lo < self.meyer_hi:
            raise ValueError("need 0 < meyer_lo < meyer_hi")
        if not self.bump_delta > 0:
            raise ValueError("bump_delta must be positive")
        if not 0 < self.c_min < self.c_max:
            raise ValueError("scales must be positive with c_min < c_max")
        if not self.alpha_max > 0:
            raise ValueError("alpha_max must be positive")
        self.n_c, self.n_alpha = int(self.n_c), int(self.n_alpha)
        if self.n_c < 2 or self.n_alpha < 2:
            raise ValueError("lattice needs at least 2 scales and 2 boosts")

    @property
    def c_lattice(self):
        return np.geomspace(self.c_min, self.c_max, self.n_c)

    @property
    def alpha_lattice(self):
        return np.linspace(-self.alpha_max, self.alpha_max, self.n_alpha)

    @property
    def scale_ratio(self):
        return (self.c_max / self.c_min) ** (1.0 / (self.n_c - 1))

    @property
    def haar_weights(self):
        """Cell weights ``d(ln c) c^-2 d(alpha)`` for the measure ``dc d(alpha) / c^3``."""
        dlnc = math.log(self.scale_ratio)
        dalpha = 2.0 * self.alpha_max / (self.n_alpha - 1)
        return (dlnc * dalpha) * self.c_lattice[:, None] ** -2.0 * np.ones(self.n_alpha)[None, :]

    @property
    def window_cd(self):
        """Cayley-Dickson components ``(w1, w2)`` of the window quaternion."""
        z1, z2 = cd_split(np.array(self.window))
        return complex(z1), complex(z2)

    @property
    def real_window(self):
        """True when the spatial window has no ``j`` part (``phi2 = 0``)."""
        return self.window_cd[1] == 0

    def params(self):
        d = asdict(self)
        d.pop("delta_const")
        d.pop("delta_spread")
        d["window"] = list(self.window)
        return d

    def same_system(self, other):
        return self.params() == other.params()

    def mother(self, cone, rho, eta):
        """Mother spectrum ``psi(rho) b(eta)`` on ``cone``, zero elsewhere."""
        cone = np.asarray(cone)
        val = meyer_profile(np.asarray(rho, dtype=float), self.meyer_lo, self.meyer_hi)
        val = val * bump_profile(np.asarray(eta, dtype=float), self.bump_delta)
        return np.where(cone == Cone.NEAR, val, 0.0), np.where(cone == Cone.FAR, val, 0.0)

    def calibrate(self, probes=None):
        """Compute and cache the admissibility constant; returns ``self``."""
        if probes is None:
            probes = default_probes(self)
        self.delta_const = admissibility_delta(self, probes)
        return self

    def require_delta(self):
        if self.delta_const is None:
            raise NotCalibratedError("admissibility constant not computed; call calibrate() first")
        return self.delta_const


def atom_spectrum(system, c, alpha, cone, freq_grid):
    """Mother spectrum evaluated at ``M_{c,alpha}^T w`` on one cone.

    Parameters
    ----------
    system : BoostletSystem
    c, alpha : float
        Scale (positive) and boost rapidity.
    cone : Cone or {"near", "far"}
        Which atom: the near-field atom or its far-field companion.
    freq_grid : tuple of ndarray
        Frequency coordinates ``(w1, w2)``.

    Returns
    -------
    ndarray
        ``psi(c rho) b(eta - alpha)`` where ``w`` lies in ``cone``, else 0.
    """
    if not c > 0:
        raise ValueError(f"scale must be positive, got {c}")
    cone = _as_cone(cone)
    code, rho, eta = hyperbolic_coords(*freq_grid)
    near, far = system.mother(code, c * rho, eta - alpha)
    return near if cone == Cone.NEAR else far


def _as_cone(cone):
    if isinstance(cone, str):
        cone = {"near": Cone.NEAR, "far": Cone.FAR}[cone.lower()]
    if cone not in (Cone.NEAR, Cone.FAR):
        raise ValueError("atoms live on the near or far cone")
    return Cone(cone)


def default_probes(system):
    """Eight near-cone and eight far-cone probe frequencies of varied rapidity."""
    out = []
    for k, eta in enumerate(np.linspace(-1.5, 1.5, 8)):
        rho = 0.6 + 0.25 * k
        sign = -1.0 if k % 2 else 1.0
        out.append((sign * rho * math.cosh(eta), sign * rho * math.sinh(eta)))
        out.append((sign * rho * math.sinh(eta), sign * rho * math.cosh(eta)))
    return out


def _delta_at(system, w, n_lnc, n_alpha):
    cone, rho, eta = hyperbolic_coords(*w)
    if cone == Cone.LIGHT:
        raise LightConeError(f"probe {w} lies on the light cone")
    lo, hi, d = system.meyer_lo, system.meyer_hi, system.bump_delta
    # midpoint rules over the support in (ln c, alpha)
    a, b = math.log(lo / rho), math.log(hi / rho)
    lnc = a + (b - a) * (np.arange(n_lnc) + 0.5) / n_lnc
    alpha = eta - d / 2 + d * (np.arange(n_alpha) + 0.5) / n_alpha
    total = 0.0
    w = np.asarray(w, dtype=float)
    for ln_c in lnc:
        c = math.exp(ln_c)
        ch, sh = np.cosh(alpha), np.sinh(alpha)
        x1 = c * (ch * w[0] - sh * w[1])
        x2 = c * (-sh * w[0] + ch * w[1])
        near, far = system.mother(*hyperbolic_coords(x1, x2))
        total += np.sum(near**2 + far**2)
    dw = qnorm_sq(np.array(system.window))
    return dw * total * (b - a) / n_lnc * d / n_alpha


def admissibility_delta(system, probe_ws, n_lnc=1024, n_alpha=256):
    """Admissibility constant by quadrature of the (c, alpha) integral.

    For each probe ``w`` the integrand ``|Phi^(M^T w)|^2 + |Phi*^(M^T w)|^2``
    is evaluated in Cartesian frequency coordinates on a midpoint lattice
    covering the atom support.  Returns the mean over probes and stores the
    relative spread ``(max - min) / mean`` on ``system.delta_spread``.
    """
    probe_ws = list(probe_ws)
    if not probe_ws:
        raise ValueError("need at least one probe frequency")
    vals = np.array([_delta_at(system, w, n_lnc, n_alpha) for w in probe_ws])
    if not np.all(np.isfinite(vals)) or np.any(vals <= 0):
        raise ValueError(f"admissibility quadrature is not finite and positive: {vals}")
    mean = float(vals.mean())
    system.delta_spread = float((vals.max() - vals.min()) / mean)
    return mean


def delta_substituted(system):
    """Admissibility constant after the substitution ``u = c rho``, ``beta = eta - alpha``.

    Each probe sees exactly one cone, so the constant is the product of the
    two one-dimensional profile integrals times ``|window|^2``.
    """
    lo, hi, d = system.meyer_lo, system.meyer_hi, system.bump_delta
    radial = integrate.quad(lambda u: meyer_profile(u, lo, hi) ** 2 / u, lo, hi, limit=400)[0]
    angular = integrate.quad(lambda x: bump_profile(x, d) ** 2, -d / 2, d / 2, limit=400)[0]
    return float(qnorm_sq(np.array(system.window))) * radial * angular


_CONFIG_TYPES = {
    "meyer_lo": float,
    "meyer_hi": float,
    "bump_delta": float,
    "c_min": float,
    "c_max": float,
    "n_c": int,
    "alpha_max": float,
    "n_alpha": int,
}


def load_config(path):
    """Read a line-oriented ``key = value`` file; ``#`` starts a comment.

    Returns a dict of raw string values; callers pick the keys they know.
    """
    out = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected 'key = value'")
            key, value = (x.strip() for x in line.split("=", 1))
            out[key] = value
    return out


def system_from_config(cfg):
    """Build a :class:`BoostletSystem` from a mapping of config strings."""
    kwargs = {k: t(cfg[k]) for k, t in _CONFIG_TYPES.items() if k in cfg}
    return BoostletSystem(**kwargs)
