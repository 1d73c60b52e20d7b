"""Scikit-learn style wrapper around the quaternion boostlet transform."""

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .boostlets import BoostletSystem
from .quaternion import QField2D, field_norm_sq
from .transform import (
    QBTCoefficients,
    coverage_fraction,
    forward_qbt,
    inverse_qbt,
    sweep,
)

__all__ = ["QuaternionBoostletTransform", "check_qfield"]


def check_qfield(X, origin=None, step=None):
    """Validate ``X`` and return it as a :class:`QField2D`.

    Arrays of shape ``(Ns, Nt, 4)`` get unit spacing and an origin that puts
    ``(0, 0)`` at sample ``(Ns // 2, Nt // 2)`` unless ``origin``/``step`` are
    given.  Non-finite samples are rejected.
    """
    if isinstance(X, QField2D):
        F = X
    else:
        arr = np.asarray(X, dtype=float)
        if arr.ndim != 3 or arr.shape[-1] != 4:
            raise ValueError(f"expected a quaternion field of shape (Ns, Nt, 4), got {arr.shape}")
        step = (1.0, 1.0) if step is None else step
        if origin is None:
            origin = (-(arr.shape[0] // 2) * step[0], -(arr.shape[1] // 2) * step[1])
        F = QField2D(arr, origin, step)
    if not np.all(np.isfinite(F.values)):
        raise ValueError("field contains non-finite samples")
    return F


class QuaternionBoostletTransform(TransformerMixin, BaseEstimator):
    """Quaternion boostlet transform with the fit/transform/inverse_transform protocol.

    ``fit`` builds the boostlet system, computes its admissibility constant and
    records the grid of the training field; ``transform`` returns
    :class:`~quatboost.transform.QBTCoefficients` and ``inverse_transform``
    maps them back to a field.

    Parameters
    ----------
    meyer_lo, meyer_hi, bump_delta, c_min, c_max, n_c, alpha_max, n_alpha
        See :class:`~quatboost.boostlets.BoostletSystem`.
    window : tuple of 4 floats, default (1, 0, 0, 0)
        Constant window quaternion.

    Attributes
    ----------
    system_ : BoostletSystem
    delta_ : float
        Admissibility constant.
    grid_shape_ : tuple
        Shape of the field seen by ``fit``.

    Examples
    --------
    >>> from quatboost import QuaternionBoostletTransform, make_grid
    >>> est = QuaternionBoostletTransform(n_c=4, n_alpha=4).fit(make_grid(32, 4.0))
    >>> round(est.delta_, 6)
    1.0
    """

    def __init__(
        self,
        meyer_lo=0.5,
        meyer_hi=2.0,
        bump_delta=0.5,
        c_min=0.3,
        c_max=3.0,
        n_c=20,
        alpha_max=2.0,
        n_alpha=20,
        window=(1.0, 0.0, 0.0, 0.0),
    ):
        self.meyer_lo = meyer_lo
        self.meyer_hi = meyer_hi
        self.bump_delta = bump_delta
        self.c_min = c_min
        self.c_max = c_max
        self.n_c = n_c
        self.alpha_max = alpha_max
        self.n_alpha = n_alpha
        self.window = window

    def fit(self, X, y=None):
        F = check_qfield(X)
        self.system_ = BoostletSystem(**self.get_params()).calibrate()
        self.delta_ = self.system_.delta_const
        self.grid_shape_ = F.shape
        return self

    def _check_grid(self, F):
        check_is_fitted(self, "system_")
        if F.shape != self.grid_shape_:
            raise ValueError(f"fitted on a {self.grid_shape_} grid, got {F.shape}")

    def transform(self, X):
        F = check_qfield(X)
        self._check_grid(F)
        return forward_qbt(F, self.system_)

    def inverse_transform(self, X):
        if not isinstance(X, QBTCoefficients):
            raise TypeError("inverse_transform expects QBTCoefficients")
        check_is_fitted(self, "system_")
        return inverse_qbt(X, self.system_)

    def score(self, X, y=None):
        """Plancherel ratio of ``X``; 1 when the lattice covers its spectrum."""
        F = check_qfield(X)
        self._check_grid(F)
        return sweep(F, self.system_) / (self.delta_ * field_norm_sq(F))

    def coverage(self, X):
        """Fraction of the spectral energy of ``X`` inside the atom supports."""
        F = check_qfield(X)
        self._check_grid(F)
        return coverage_fraction(F, self.system_)

