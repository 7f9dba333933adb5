"""Shared fixtures, random-instance factories, and independent oracles.

The oracles here deliberately avoid the library's own code paths where the
point is cross-validation: the apex-grid oracle evaluates coefficients by a
plain trapezoid character sum on a non-power-of-two grid (not the FFT path),
and Monte Carlo checks go through raw sampling.
"""

import numpy as np
import pytest
from scipy.special import ndtr

from qfan import Configuration, Disk, Gaussian, MassSpec, PlanarMassSpec
from qfan._kernels import bvn_cdf


@pytest.fixture
def rng():
    return np.random.default_rng(20260815)


def random_gaussian_mass(rng, dim=1, k=3):
    """Well-conditioned mixture: sigma in [0.5, 1.5], means within the 2-box."""
    comps = [
        Gaussian(
            mean=rng.uniform(-2, 2, dim) + 1j * rng.uniform(-2, 2, dim),
            sigma=float(rng.uniform(0.5, 1.5)),
            weight=float(rng.uniform(0.5, 2.0)),
        )
        for _ in range(k)
    ]
    return MassSpec(comps)


def random_planar_mixture(rng, k=3, with_disks=True):
    comps = []
    for i in range(k):
        if with_disks and i % 3 == 2:
            comps.append(
                Disk(
                    center=complex(rng.uniform(-2, 2), rng.uniform(-2, 2)),
                    radius=float(rng.uniform(0.3, 1.0)),
                    weight=float(rng.uniform(0.5, 2.0)),
                )
            )
        else:
            comps.append(
                Gaussian(
                    mean=rng.uniform(-2, 2, 1) + 1j * rng.uniform(-2, 2, 1),
                    sigma=float(rng.uniform(0.5, 1.5)),
                    weight=float(rng.uniform(0.5, 2.0)),
                )
            )
    return PlanarMassSpec(comps)


def random_configuration(rng, dim=1, min_a=0.3):
    while True:
        v = rng.normal(size=dim + 1) + 1j * rng.normal(size=dim + 1)
        v /= np.linalg.norm(v)
        if np.linalg.norm(v[:-1]) >= min_a:
            return Configuration(a=v[:-1], b=complex(v[-1]))


def _wedge_prob_grid(mean_rel, sigma_rel, q, theta):
    # Broadcast wedge probabilities: mean_rel/sigma_rel of shape (..., C),
    # theta of shape (N,), result (..., C, N).
    mu = mean_rel[..., None] * np.exp(-1j * theta)
    sig = sigma_rel[..., None]
    if q == 2:
        return ndtr(np.clip(mu.real / sig, -40, 40))
    alpha = np.pi / q
    k1 = np.clip(np.imag(mu * np.exp(1j * alpha)) / sig, -40, 40)
    k2 = np.clip(np.imag(mu * np.exp(-1j * alpha)) / sig, -40, 40)
    return ndtr(k1) - bvn_cdf(k1, k2, np.cos(2 * alpha))


def oracle_coefficient_surface(mass, q, m_exp, apexes, n_theta=64):
    """|c_m| at each planar apex, by direct character sum (no FFT).

    ``apexes`` is a flat complex array. Gaussian-only masses in the plane.
    The grid size need not be a power of two; 64 samples suffice because the
    smooth test mixtures have coefficients far below machine noise by m ~ 60.
    """
    means = np.array([complex(c.mean[0]) for c in mass.components])
    sigmas = np.array([c.sigma for c in mass.components])
    weights = np.array([c.weight for c in mass.components])
    theta = 2.0 * np.pi * np.arange(n_theta) / n_theta
    char = np.exp(-1j * m_exp * theta)
    scale = np.sqrt(1.0 + np.abs(apexes) ** 2)
    mean_rel = (means[None, :] - apexes[:, None]) / scale[:, None]
    sigma_rel = sigmas[None, :] / scale[:, None]
    probs = _wedge_prob_grid(mean_rel, sigma_rel, q, theta)
    f = np.einsum("c,pcn->pn", weights, probs)
    return np.abs(f @ char) / n_theta


def oracle_best_apex(mass, q, m_exp, lo=-4.0, hi=4.0, coarse=201, fine=161):
    """Two-stage dense grid search minimizing |c_m| over apex points.

    Returns (apex, resolution) where resolution is the fine grid step. The
    coarse pass covers [lo, hi]^2; the fine pass shrinks to a two-step
    neighborhood of the coarse argmin.
    """
    xs = np.linspace(lo, hi, coarse)
    px, py = np.meshgrid(xs, xs)
    pts = (px + 1j * py).ravel()
    vals = oracle_coefficient_surface(mass, q, m_exp, pts)
    p0 = pts[int(np.argmin(vals))]
    step = xs[1] - xs[0]
    xs2 = np.linspace(-2 * step, 2 * step, fine)
    qx, qy = np.meshgrid(xs2, xs2)
    pts2 = (p0 + qx + 1j * qy).ravel()
    vals2 = oracle_coefficient_surface(mass, q, m_exp, pts2)
    p1 = pts2[int(np.argmin(vals2))]
    return complex(p1), float(xs2[1] - xs2[0])


def sample_reference(mass, n, seed):
    """Plain rejection-free sampler mirroring the mixture definition."""
    rng = np.random.default_rng(seed)
    weights = np.array([c.weight for c in mass.components])
    counts = rng.multinomial(n, weights / weights.sum())
    out = []
    for comp, k in zip(mass.components, counts):
        if k == 0:
            continue
        if isinstance(comp, Gaussian):
            z = rng.normal(size=(k, comp.dim)) + 1j * rng.normal(size=(k, comp.dim))
            out.append(comp.mean[None, :] + comp.sigma * z)
        else:
            r = comp.radius * np.sqrt(rng.uniform(size=k))
            ang = rng.uniform(0, 2 * np.pi, size=k)
            out.append((comp.center + r * np.exp(1j * ang))[:, None])
    return np.concatenate(out, axis=0)
