"""Quaternion boostlet transform: quaternion fields, the two-sided quaternion
Fourier transform, boostlet systems, the forward/inverse transform and
uncertainty-inequality checks."""

from .boostlets import (
    BoostletSystem,
    Cone,
    ConeCoords,
    LightConeError,
    NotCalibratedError,
    admissibility_delta,
    atom_spectrum,
    bump_profile,
    classify_cone,
    meyer_profile,
)
from .estimator import QuaternionBoostletTransform, check_qfield
from .fourier import QSpectrum2D, brute_force_qft, qconvolve, qft_forward, qft_inverse
from .quaternion import (
    QField2D,
    cd_join,
    cd_split,
    field_inner,
    field_norm_sq,
    make_grid,
    qconj,
    qinv,
    qmul,
    qnorm_sq,
    quat,
)
from .signals import (
    PacketSpec,
    add_quaternion_noise,
    generator_suite,
    make_gaussian_packet,
    make_two_packet_signal,
    reference_packet,
    sparsity_ratio,
)
from .transform import (
    QBTCoefficients,
    componentwise_scalar_bt,
    forward_qbt,
    inverse_qbt,
    plancherel_ratio,
    transform_energy,
)
from .uncertainty import (
    InequalityReport,
    check_heisenberg,
    check_logarithmic,
    check_pitt,
    check_power_uncertainty,
    pitt_constant,
)

__all__ = [
    "BoostletSystem",
    "Cone",
    "ConeCoords",
    "LightConeError",
    "NotCalibratedError",
    "admissibility_delta",
    "atom_spectrum",
    "bump_profile",
    "classify_cone",
    "meyer_profile",
    "QuaternionBoostletTransform",
    "check_qfield",
    "QSpectrum2D",
    "brute_force_qft",
    "qconvolve",
    "qft_forward",
    "qft_inverse",
    "QField2D",
    "cd_join",
    "cd_split",
    "field_inner",
    "field_norm_sq",
    "make_grid",
    "qconj",
    "qinv",
    "qmul",
    "qnorm_sq",
    "quat",
    "PacketSpec",
    "add_quaternion_noise",
    "generator_suite",
    "make_gaussian_packet",
    "make_two_packet_signal",
    "reference_packet",
    "sparsity_ratio",
    "QBTCoefficients",
    "componentwise_scalar_bt",
    "forward_qbt",
    "inverse_qbt",
    "plancherel_ratio",
    "transform_energy",
    "InequalityReport",
    "check_heisenberg",
    "check_logarithmic",
    "check_pitt",
    "check_power_uncertainty",
    "pitt_constant",
]

__version__ = "0.1.0"
