"""Weighted energies and uncertainty-inequality checks for the boostlet transform.

Every check returns an :class:`InequalityReport`.  The ``ratio`` is oriented
so that ``ratio <= 1`` means the inequality holds; for the logarithmic
inequality, whose bound is negative, the ratio is ``rhs / lhs``.
"""

import math
from dataclasses import asdict, dataclass

import numpy as np
from scipy import special

from .fourier import qft_forward
from .quaternion import field_norm_sq
from .transform import coverage_fraction, sweep

__all__ = [
    "InequalityReport",
    "tau_weight",
    "omega_weight",
    "weighted_tau_energy",
    "weighted_omega_energy",
    "pitt_constant",
    "power_constant",
    "log_constant",
    "check_power_uncertainty",
    "check_heisenberg",
    "check_logarithmic",
    "check_pitt",
]

PASS_TOL = 1e-9


@dataclass
class InequalityReport:
    kind: str
    lhs: float
    rhs: float
    constant: float
    ratio: float
    passed: bool
    margin: float
    m: float = None
    n: float = None
    lam: float = None
    coverage: float = None

    def to_dict(self):
        d = asdict(self)
        d["pass"] = d.pop("passed")
        d["lambda"] = d.pop("lam")
        return d


def _radial_weight(r, kind, exponent):
    """Weight values and a mask of usable samples (the origin is dropped when singular)."""
    if kind == "log":
        keep = r > 0
        return np.log(np.where(keep, r, 1.0)), keep
    if kind != "power":
        raise ValueError(f"unknown weight kind {kind!r}")
    if exponent < 0:
        keep = r > 0
        return np.where(keep, r, 1.0) ** exponent, keep
    return r**exponent, np.ones(r.shape, dtype=bool)


def tau_weight(grid, kind="power", exponent=2.0):
    """Weight ``|tau|^p`` or ``ln|tau|`` on the tau grid, zero at an excluded origin."""
    s, t = grid.meshgrid()
    w, keep = _radial_weight(np.hypot(s, t), kind, exponent)
    return np.where(keep, w, 0.0)


def omega_weight(spectrum, kind="power", exponent=2.0):
    """Weight ``|w|^p`` or ``ln|w|`` on the frequency lattice, zero at an excluded origin."""
    if kind == "power" and exponent < 0 and not -2 < exponent:
        raise ValueError(f"negative power must lie in (-2, 0], got {exponent}")
    w1, w2 = spectrum.meshgrid()
    w, keep = _radial_weight(np.hypot(w1, w2), kind, exponent)
    return np.where(keep, w, 0.0)


def weighted_tau_energy(coef, kind="power", exponent=2.0):
    """``sum w_{c,alpha} sum_tau weight(|tau|) (|C1|^2 + |C2|^2) ds dt``."""
    weight = tau_weight(coef.field(1, 0, 0), kind, exponent)
    dens = np.sum(coef.c1**2, axis=-1) + np.sum(coef.c2**2, axis=-1)
    per_cell = np.einsum("ijab,ab->ij", dens, weight)
    return float(np.sum(coef.haar_weights * per_cell) * coef.cell_area)


def weighted_omega_energy(spectrum, kind="power", exponent=2.0):
    """Riemann sum of ``weight(|w|) |F^(w)|^2``; the zero bin is dropped for singular weights."""
    weight = omega_weight(spectrum, kind, exponent)
    return float(np.sum(weight * np.sum(spectrum.values**2, axis=-1)) * spectrum.cell_area)


def _tau_energies(F, system, weights):
    """Several tau-weighted energies of the transform of ``F`` in one sweep."""
    totals = np.zeros(len(weights))
    hw = system.haar_weights

    def visit(i, j, c1, c2):
        dens = np.sum(c1**2, axis=-1) + np.sum(c2**2, axis=-1)
        for k, w in enumerate(weights):
            totals[k] += hw[i, j] * np.sum(w * dens)

    sweep(F, system, visit)
    return totals * F.cell_area


def pitt_constant(lam):
    """``C_lam = pi^lam [Gamma((2 - lam)/4) / Gamma((2 + lam)/4)]^2`` for ``0 <= lam < 2``."""
    if not 0 <= lam < 2:
        raise ValueError(f"Pitt exponent must satisfy 0 <= lambda < 2, got {lam}")
    return math.pi**lam * (special.gamma((2 - lam) / 4) / special.gamma((2 + lam) / 4)) ** 2


def power_constant(m, n):
    """``(1/4)^{mn/(m+n)}``, available for ``m, n >= 1`` only."""
    if m < 1 or n < 1:
        raise ValueError(f"constant unavailable for m={m}, n={n}; need m, n >= 1")
    return 0.25 ** (m * n / (m + n))


def log_constant():
    """``psi(1/2) - ln(pi)``, about -3.1082."""
    return float(special.digamma(0.5)) - math.log(math.pi)


def _ratio_lower_bound(lhs, rhs):
    """Orientation for checks of the form ``rhs >= lhs``."""
    if lhs > 0:
        return lhs / rhs if rhs > 0 else math.inf
    if lhs < 0:
        return rhs / lhs
    return 0.0 if rhs >= 0 else math.inf


def _report(kind, lhs, rhs, constant, ratio, **extra):
    return InequalityReport(
        kind=kind,
        lhs=float(lhs),
        rhs=float(rhs),
        constant=float(constant),
        ratio=float(ratio),
        passed=bool(ratio <= 1 + PASS_TOL),
        margin=float(1 - ratio),
        **extra,
    )


def _power_report(F, system, m, n, kind):
    const = power_constant(m, n)
    delta = system.require_delta()
    norm = field_norm_sq(F)
    (tau_mom,) = _tau_energies(F, system, [tau_weight(F, "power", 2 * m)])
    omega_mom = weighted_omega_energy(qft_forward(F), "power", 2 * n)
    p, q = n / (m + n), m / (m + n)
    lhs = const * delta**p * norm
    rhs = tau_mom**p * omega_mom**q
    return _report(
        kind, lhs, rhs, const, _ratio_lower_bound(lhs, rhs), m=m, n=n,
        coverage=coverage_fraction(F, system),
    )


def check_power_uncertainty(F, system, m, n):
    """Power-weighted inequality ``(tau moment)^{n/(m+n)} (w moment)^{m/(m+n)} >= C Delta^{n/(m+n)} ||F||^2``.

    The tau moment is ``int |tau|^{2m} ||QB F||^2`` over the Haar measure and
    the frequency moment is ``int |w|^{2n} |F^(w)|^2`` with the two-sided
    quaternion spectrum.
    """
    return _power_report(F, system, m, n, f"Power({m:g},{n:g})")


def check_heisenberg(F, system):
    """Heisenberg inequality, the ``m = n = 1`` case with constant ``sqrt(Delta)/2``."""
    return _power_report(F, system, 1, 1, "Heisenberg")


def check_logarithmic(F, system):
    """``int ln|tau| ||QB F||^2 + Delta int ln|w| |F^|^2 >= (psi(1/2) - ln pi) Delta ||F||^2``."""
    const = log_constant()
    delta = system.require_delta()
    lhs = const * delta * field_norm_sq(F)
    (tau_log,) = _tau_energies(F, system, [tau_weight(F, "log")])
    rhs = tau_log + delta * weighted_omega_energy(qft_forward(F), "log")
    return _report(
        "Logarithmic", lhs, rhs, const, _ratio_lower_bound(lhs, rhs),
        coverage=coverage_fraction(F, system),
    )


def check_pitt(F, system, lam):
    """Pitt inequality ``Delta int |w|^{-lam} |F^|^2 <= C_lam int |tau|^lam ||QB F||^2``."""
    const = pitt_constant(lam)
    delta = system.require_delta()
    lhs = delta * weighted_omega_energy(qft_forward(F), "power", -lam)
    (tau_mom,) = _tau_energies(F, system, [tau_weight(F, "power", lam)])
    rhs = const * tau_mom
    ratio = lhs / rhs if rhs > 0 else math.inf
    return _report(
        f"Pitt({lam:g})", lhs, rhs, const, ratio, lam=lam,
        coverage=coverage_fraction(F, system),
    )
