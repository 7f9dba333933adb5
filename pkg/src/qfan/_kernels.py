"""Planar measure kernels: wedge and half-plane masses of Gaussians and disks.

A wedge here is the closed sector of half-angle alpha = pi/q about the
direction theta, with its corner at the origin:

    W(q, theta) = { v : |arg(v e^{-i theta})| <= pi/q }.

Everything is exact up to floating point. Gaussian wedge masses reduce to the
bivariate normal CDF, evaluated through Owen's T function; disk wedge masses
have piecewise closed-form areas. A slow adaptive-quadrature route for the
Gaussian case is kept alongside as an independent cross-check.
"""

from __future__ import annotations

import numpy as np
from scipy.integrate import quad
from scipy.special import ndtr, owens_t

__all__ = [
    "bvn_cdf",
    "gaussian_wedge_prob",
    "gaussian_wedge_prob_quad",
    "disk_wedge_area",
    "gaussian_halfplane_prob",
    "disk_halfplane_area",
]

# ndtr saturates to 0/1 well before |x| = 40; clipping there avoids inf*0
# products in the Owen's T bookkeeping when sigma is extremely small.
_CLIP = 40.0


def bvn_cdf(h, k, rho: float):
    """P(X <= h, Y <= k) for standard bivariate normal variables.

    Uses the classical reduction to Owen's T:

        Phi2(h, k; rho) = (Phi(h) + Phi(k))/2 - T(h, a_h) - T(k, a_k) - delta

    with a_h = (k - rho h) / (h sqrt(1 - rho^2)), delta = 1/2 when the
    arguments lie in opposite quadrants. The h -> 0 limit of the T term is
    sign(k)/4, from T(0, +-inf) = +-1/4.
    """
    h = np.clip(np.asarray(h, dtype=float), -_CLIP, _CLIP)
    k = np.clip(np.asarray(k, dtype=float), -_CLIP, _CLIP)
    h, k = np.broadcast_arrays(h, k)
    rho = float(rho)
    if abs(rho) >= 1.0 - 1e-14:
        if rho > 0.0:
            out = ndtr(np.minimum(h, k))
        else:
            out = np.clip(ndtr(h) + ndtr(k) - 1.0, 0.0, 1.0)
        return out if out.ndim else float(out)

    root = np.sqrt(1.0 - rho * rho)

    def t_term(x, y):
        num = y - rho * x
        # Near-zero x drives the slope to +-inf, which owens_t resolves to
        # the correct +-1/4 limit; only exact zero needs the explicit branch.
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            slope = np.where(x != 0.0, num / (np.where(x != 0.0, x, 1.0) * root), 0.0)
        tt = owens_t(x, slope)
        return np.where(x == 0.0, np.sign(num) / 4.0, tt)

    opposite = (h * k < 0.0) | ((h * k == 0.0) & ((h < 0.0) | (k < 0.0)))
    delta = np.where(opposite, 0.5, 0.0)
    out = 0.5 * (ndtr(h) + ndtr(k)) - t_term(h, k) - t_term(k, h) - delta
    out = np.where((h == 0.0) & (k == 0.0), 0.25 + np.arcsin(rho) / (2.0 * np.pi), out)
    out = np.clip(out, 0.0, 1.0)
    return out if out.ndim else float(out)


def gaussian_wedge_prob(mean: complex, sigma: float, q: int, theta):
    """Mass in the wedge W(q, theta) under a planar N(mean, sigma^2 I) law.

    Rotate so the wedge is symmetric about the positive real axis. For q = 2
    the wedge is the half-plane Re >= 0. For q >= 3 it is an intersection of
    two half-planes whose one-sided normal projections are jointly Gaussian
    with correlation cos(2 pi / q), so the mass is
    Phi(k1) - Phi2(k1, k2; cos 2a) with a = pi/q.
    """
    theta = np.asarray(theta, dtype=float)
    alpha = np.pi / q
    mu = mean * np.exp(-1j * theta)
    if q == 2:
        out = ndtr(np.clip(mu.real / sigma, -_CLIP, _CLIP))
        return out if out.ndim else float(out)
    k1 = np.clip(np.imag(mu * np.exp(1j * alpha)) / sigma, -_CLIP, _CLIP)
    k2 = np.clip(np.imag(mu * np.exp(-1j * alpha)) / sigma, -_CLIP, _CLIP)
    out = ndtr(k1) - bvn_cdf(k1, k2, np.cos(2.0 * alpha))
    out = np.clip(out, 0.0, 1.0)
    return out if out.ndim else float(out)


def _ray_mass_density(eta, s: float, beta: float):
    # Mass density (per unit angle) of N(mu, I) along the ray at angle eta,
    # where s = |mu| and beta = arg(mu): integrate r * phi2(r e^{i eta} - mu)
    # over r >= 0 in closed form.
    t = s * np.cos(eta - beta)
    return (
        np.exp(-0.5 * s * s)
        + t * np.sqrt(2.0 * np.pi) * np.exp(-0.5 * (s * s - t * t)) * ndtr(t)
    ) / (2.0 * np.pi)


def gaussian_wedge_prob_quad(mean: complex, sigma: float, q: int, theta: float) -> float:
    """Same quantity as :func:`gaussian_wedge_prob`, by angular quadrature.

    Integrates the exact ray-mass density of the standardized law over the
    wedge's angular extent. Orders of magnitude slower; retained as an
    independent route for tests and cross-checks.
    """
    alpha = np.pi / q
    mu = mean * np.exp(-1j * float(theta)) / sigma
    s = abs(mu)
    beta = float(np.angle(mu))
    pts = [x for x in (beta, -beta) if -alpha < x < alpha]
    val, _ = quad(
        _ray_mass_density,
        -alpha,
        alpha,
        args=(s, beta),
        points=pts or None,
        limit=200,
        epsabs=1e-13,
        epsrel=1e-12,
    )
    return float(val)


def disk_wedge_area(center: complex, radius: float, q: int, theta):
    """Area of the intersection of W(q, theta) with the disk B(center, radius).

    Work in polar coordinates about the disk center direction psi = arg center
    with d = |center|. Writing u(x) = d sin x for the signed distance from the
    origin-ray at offset angle x to the center:

    * d < R: the origin is interior, every ray crosses the boundary once, and
      the sector integral (1/2) int rho(x)^2 dx has the global antiderivative
      F(x) = (R^2 x + (d^2/2) sin 2x + u sqrt(R^2-u^2) + R^2 asin(u/R)) / 2.
    * d >= R: rays meet the disk only for x in [-asin(R/d), asin(R/d)] modulo
      2 pi, where the chord contributes G(x) = u sqrt(R^2-u^2) + R^2 asin(u/R).
    """
    theta = np.asarray(theta, dtype=float)
    alpha = np.pi / q
    d = abs(center)
    R = float(radius)
    if d <= 1e-300:
        out = np.full(theta.shape, R * R * alpha)
        return out if out.ndim else float(out)
    psi = np.angle(center)
    x_mid = (theta - psi + np.pi) % (2.0 * np.pi) - np.pi
    x_lo = x_mid - alpha
    x_hi = x_mid + alpha
    if d < R:

        def F(x):
            u = d * np.sin(x)
            return 0.5 * (
                R * R * x
                + 0.5 * d * d * np.sin(2.0 * x)
                + u * np.sqrt(R * R - u * u)
                + R * R * np.arcsin(u / R)
            )

        out = F(x_hi) - F(x_lo)
        return out if out.ndim else float(out)

    beta = np.arcsin(min(1.0, R / d))

    def G(x):
        u = np.clip(d * np.sin(x), -R, R)
        return u * np.sqrt(np.maximum(R * R - u * u, 0.0)) + R * R * np.arcsin(
            np.clip(u / R, -1.0, 1.0)
        )

    out = np.zeros(theta.shape)
    for j in (-1.0, 0.0, 1.0):
        lo = np.clip(x_lo, -beta + 2.0 * np.pi * j, beta + 2.0 * np.pi * j)
        hi = np.clip(x_hi, -beta + 2.0 * np.pi * j, beta + 2.0 * np.pi * j)
        out = out + G(hi - 2.0 * np.pi * j) - G(lo - 2.0 * np.pi * j)
    out = np.maximum(out, 0.0)
    return out if out.ndim else float(out)


def gaussian_halfplane_prob(mean: complex, sigma: float, direction: float, t: float):
    """Mass of {v : <v, e^{i direction}> <= t} under N(mean, sigma^2 I).

    The projection onto the unit direction is N(Re(mean e^{-i direction}),
    sigma^2), so this is a single Phi evaluation.
    """
    proj = np.real(mean * np.exp(-1j * np.asarray(direction, dtype=float)))
    out = ndtr(np.clip((t - proj) / sigma, -_CLIP, _CLIP))
    return out if np.ndim(out) else float(out)


def disk_halfplane_area(center: complex, radius: float, direction: float, t: float):
    """Area of {v : <v, e^{i direction}> <= t} intersected with B(center, radius).

    With delta = t - Re(center e^{-i direction}) the signed margin of the cut,
    the circular-segment area is
    delta sqrt(R^2 - delta^2) + R^2 asin(delta/R) + pi R^2 / 2, clamped at the
    empty and full extremes.
    """
    R = float(radius)
    proj = np.real(center * np.exp(-1j * np.asarray(direction, dtype=float)))
    delta = np.clip(t - proj, -R, R)
    out = delta * np.sqrt(np.maximum(R * R - delta * delta, 0.0)) + R * R * (
        np.arcsin(np.clip(delta / R, -1.0, 1.0)) + 0.5 * np.pi
    )
    return out if np.ndim(out) else float(out)
