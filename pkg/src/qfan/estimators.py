"""Scikit-learn style estimators wrapping the solver and fan constructions.

These give the library a fit/predict surface for pipeline-ish use: ``fit``
consumes masses (or raw point clouds, smoothed into small-bandwidth Gaussian
mixtures, since the underlying theory needs absolutely continuous measures)
and computes the center structure; ``predict`` labels points by the sector
they fall in. Everything heavy lives in :mod:`qfan.solver` and
:mod:`qfan.fan`; the estimators only adapt inputs and hold fitted state.
"""

from __future__ import annotations

import warnings

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.exceptions import ConvergenceWarning
from sklearn.utils.validation import check_is_fitted

from ._validation import as_complex_points, check_positive
from .fan import regular_six_fan
from .measures import Gaussian, MassSpec
from .solver import SolveProblem, solve

__all__ = ["FanCenter", "SixFanCenter", "mass_from_points"]


def mass_from_points(X, bandwidth: float = 0.2) -> MassSpec:
    """Smooth a point cloud into an equal-weight Gaussian mixture.

    ``X`` may be complex of shape (n, d) (or (n,) for the plane) or real of
    shape (n, 2d) with (re, im) pairs. Each point becomes an isotropic
    Gaussian of scale ``bandwidth`` and weight 1/n, so the total mass is 1.
    """
    check_positive("bandwidth", bandwidth)
    arr = np.asarray(X)
    if np.iscomplexobj(arr):
        dim = 1 if arr.ndim == 1 else arr.shape[-1]
    else:
        arr2 = np.asarray(arr, dtype=float)
        if arr2.ndim == 1 and arr2.shape[0] == 2:
            dim = 1
        elif arr2.ndim == 2 and arr2.shape[1] % 2 == 0:
            dim = arr2.shape[1] // 2
        else:
            raise ValueError(f"cannot infer dimension from shape {arr2.shape}")
    pts = as_complex_points(arr, dim=dim)
    n = pts.shape[0]
    return MassSpec([Gaussian(mean=row, sigma=float(bandwidth), weight=1.0 / n) for row in pts])


def _as_mass_list(X, bandwidth: float) -> list[MassSpec]:
    if isinstance(X, MassSpec):
        return [X]
    if isinstance(X, np.ndarray):
        return [mass_from_points(X, bandwidth)]
    if isinstance(X, (list, tuple)):
        if all(isinstance(m, MassSpec) for m in X):
            return list(X)
        return [
            m if isinstance(m, MassSpec) else mass_from_points(m, bandwidth) for m in X
        ]
    raise TypeError(
        "X must be a MassSpec, an array of points, or a sequence mixing those"
    )


class FanCenter(BaseEstimator):
    """Estimator for a center hyperplane with vanishing sector coefficients.

    Fitting solves for a configuration x = (a, b) on which the prescribed
    Fourier coefficients of the q-sector profiles of the input masses all
    vanish. The fitted hyperplane plays the role of an equipartition-quality
    center: each mass sees every sector with measure close to total/q.

    Parameters
    ----------
    q : int, default=2
        Number of sectors in the regular fan.
    exponents : tuple of int or None, default=None
        Coefficient index annihilated per mass; None means 1 for each.
    grid_size : int, default=256
        Angular samples per profile evaluation (power of two).
    tol : float, default=1e-6
        Residual tolerance relative to the largest total mass.
    n_starts : int, default=32
        Multistart budget.
    random_state : int, default=0
        Seed for the start sampler.
    bandwidth : float, default=0.2
        Gaussian scale used when point clouds are smoothed into masses.

    Attributes
    ----------
    result_ : SolveResult
        Full solver output including the multistart trace.
    x_ : Configuration
        The fitted configuration.
    hyperplane_ : HyperplaneDesc
        Its hyperplane; ``apex_`` additionally holds the planar apex when
        the ambient dimension is one.
    residual_ : float
        Final coefficient residual.
    converged_ : bool
        Whether the residual met the tolerance.
    """

    def __init__(
        self,
        q: int = 2,
        exponents=None,
        grid_size: int = 256,
        tol: float = 1e-6,
        n_starts: int = 32,
        random_state: int = 0,
        bandwidth: float = 0.2,
    ):
        self.q = q
        self.exponents = exponents
        self.grid_size = grid_size
        self.tol = tol
        self.n_starts = n_starts
        self.random_state = random_state
        self.bandwidth = bandwidth

    def fit(self, X, y=None):
        masses = _as_mass_list(X, self.bandwidth)
        exponents = self.exponents
        if exponents is None:
            exponents = (1,) * len(masses)
        problem = SolveProblem(
            masses=tuple(masses),
            exponents=tuple(exponents),
            q=self.q,
            grid_size=self.grid_size,
            tol=self.tol,
            starts=self.n_starts,
            seed=self.random_state,
        )
        result = solve(problem)
        if not result.converged:
            warnings.warn(
                f"residual {result.residual:.3e} above tolerance "
                f"{problem.tol_abs:.3e} after {problem.starts} starts",
                ConvergenceWarning,
            )
        self.result_ = result
        # The solver's chart leaves a residual phase on the configuration.
        # Rotate it away so predict() labels sectors by actual plane
        # directions: with the dominant entry of a real-positive, the
        # projection of a planar point u is (scale * u + const).
        x = result.x
        phi = -float(np.angle(x.a[int(np.argmax(np.abs(x.a)))]))
        self.x_ = x.rotate(phi)
        self.residual_ = result.residual
        self.converged_ = result.converged
        self.hyperplane_ = result.hyperplane
        self.apex_ = result.hyperplane.apex if result.hyperplane is not None else None
        self.coefficients_ = result.coefficients * np.exp(
            1j * np.asarray(exponents, dtype=float) * phi
        )
        self.n_features_in_ = 2 * problem.dim
        return self

    def predict(self, X, theta: float = 0.0) -> np.ndarray:
        """Label points by the sector (0..q-1) containing them.

        Sector k is the wedge at angle theta + 2 pi k / q; boundary points
        get the higher of the two adjacent labels.
        """
        check_is_fitted(self, "x_")
        pts = as_complex_points(X, dim=self.x_.dim)
        v = self.x_.project(pts)
        q = int(self.q)
        rel = np.angle(v) - float(theta) + np.pi / q
        return np.floor((rel % (2.0 * np.pi)) / (2.0 * np.pi / q)).astype(int) % q


class SixFanCenter(BaseEstimator):
    """Estimator for the planar three-line bisecting fan.

    Fitting finds three concurrent lines, pi/3 apart in direction, each
    splitting the mass in half. ``predict`` labels points by which of the
    six angular sectors around the common center they occupy.

    Parameters
    ----------
    scan_points : int, default=720
        Resolution of the base-direction scan.
    bandwidth : float, default=0.2
        Gaussian scale for point-cloud inputs.

    Attributes
    ----------
    fan_ : SixFan
    center_ : complex
    base_angle_ : float
    bisection_errors_ : tuple of float
    """

    def __init__(self, scan_points: int = 720, bandwidth: float = 0.2):
        self.scan_points = scan_points
        self.bandwidth = bandwidth

    def fit(self, X, y=None):
        masses = _as_mass_list(X, self.bandwidth)
        if len(masses) != 1 or masses[0].dim != 1:
            raise ValueError("SixFanCenter fits exactly one planar mass")
        fan = regular_six_fan(masses[0], scan_points=self.scan_points)
        self.fan_ = fan
        self.center_ = fan.center
        self.base_angle_ = fan.base_angle
        self.lines_ = fan.lines
        self.bisection_errors_ = fan.bisection_errors
        self.n_features_in_ = 2
        return self

    def predict(self, X) -> np.ndarray:
        """Label points 0..5 by angular sector around the fitted center."""
        check_is_fitted(self, "fan_")
        pts = as_complex_points(X, dim=1)[:, 0]
        rel = np.angle(pts - self.center_) - (self.base_angle_ + 0.5 * np.pi)
        return np.floor((np.asarray(rel) % (2.0 * np.pi)) / (np.pi / 3.0)).astype(int) % 6
