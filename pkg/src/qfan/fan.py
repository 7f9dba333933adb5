"""Planar fan constructions: bisecting lines, regular six-fans, certificates.

For a planar mass and a unit direction e^{i gamma}, the half-plane
{u : <u, e^{i gamma}> <= t} sweeps monotonically from empty to full as t
grows, so a unique (possibly non-strict) bisection offset t(gamma) exists.
Three directions gamma, gamma + pi/3, gamma + 2pi/3 give three bisecting
lines; the scalar

    f(gamma) = <p1(gamma), e^{i gamma}> - t(gamma),

where p1 is the intersection of the latter two lines, measures the signed
offset of the first line from that point. Shifting gamma by pi flips the
offsets but keeps the geometric lines, so f(gamma + pi) = -f(gamma) and a
sign change is guaranteed on any half circle: at the root all three lines
pass through one point, a regular six-fan whose six sectors each see between
nothing and half of the mass. That pins the uniform deviation of the induced
q-sector profiles at the fan center to at most max(1/q, (q-2)/2q) times the
total mass, which is what the certificate checks. The adversarial family (2n
tiny disks in two far-apart clusters) shows the certificate's constant is
essentially the best possible for any center.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from ._kernels import disk_halfplane_area, gaussian_halfplane_prob
from ._validation import check_grid_size, check_positive, check_q, check_rng
from .measures import (
    Configuration,
    Disk,
    Gaussian,
    MassSpec,
    PlanarMassSpec,
    sector_measure,
)

__all__ = [
    "FanLine",
    "SixFan",
    "FanScanError",
    "AdversarialSpec",
    "CertificateReport",
    "halfplane_measure",
    "bisecting_line",
    "regular_six_fan",
    "centerpoint_certificate",
    "adversarial_mass",
    "worst_center_deviation",
]


class FanScanError(RuntimeError):
    """The direction scan found no sign change (carries the scan trace)."""

    def __init__(self, message, angles=None, values=None):
        super().__init__(message)
        self.angles = angles
        self.values = values


@dataclass(frozen=True)
class FanLine:
    """The line {u : <u, e^{i direction}> = offset}."""

    direction: float
    offset: float


@dataclass(frozen=True)
class SixFan:
    """Three concurrent bisecting lines with directions pi/3 apart."""

    center: complex
    base_angle: float
    lines: tuple[FanLine, FanLine, FanLine]
    bisection_errors: tuple[float, float, float]


@dataclass(frozen=True)
class CertificateReport:
    """Uniform-deviation certificate of q-sector profiles at a fan center."""

    q: int
    center: complex
    linf: float
    bound: float
    passed: bool
    worst_theta: float
    grid_size: int
    fan: SixFan


@dataclass(frozen=True)
class AdversarialSpec:
    """Parameters of the two-cluster disk family: 2n disks of radius delta.

    n disk centers land in each of [-r-1, -r] and [r, r+1]; delta < 1/(2n)
    leaves room for pairwise disjointness inside a unit interval.
    """

    q: int
    n: int
    r: float
    delta: float

    def __post_init__(self):
        object.__setattr__(self, "q", check_q(self.q))
        n = int(self.n)
        if n < 1:
            raise ValueError(f"n must be at least 1, got {n}")
        object.__setattr__(self, "n", n)
        r = check_positive("r", self.r)
        if r <= 2.0:
            raise ValueError(f"r must exceed 2, got {r}")
        object.__setattr__(self, "r", r)
        delta = check_positive("delta", self.delta)
        if not delta < 1.0 / (2 * n):
            raise ValueError(f"delta must be below 1/(2n) = {1.0 / (2 * n)}, got {delta}")
        object.__setattr__(self, "delta", delta)


def halfplane_measure(p: MassSpec, direction: float, t: float) -> float:
    """Mass of the half-plane {u : <u, e^{i direction}> <= t}."""
    if p.dim != 1:
        raise ValueError("halfplane_measure needs a planar mass")
    direction = float(direction)
    t = float(t)
    out = 0.0
    for comp in p.components:
        if isinstance(comp, Gaussian):
            out += comp.weight * gaussian_halfplane_prob(
                complex(comp.mean[0]), comp.sigma, direction, t
            )
        else:
            area = disk_halfplane_area(comp.center, comp.radius, direction, t)
            out += comp.weight * area / (np.pi * comp.radius**2)
    return float(out)


def _support_bracket(p: MassSpec, direction: float) -> tuple[float, float]:
    # An interval of offsets certain to bracket the half-mass point: beyond
    # 12 sigma a Gaussian's tail mass is ~1e-33 of its weight.
    lo, hi = np.inf, -np.inf
    e = np.exp(-1j * direction)
    for comp in p.components:
        if isinstance(comp, Gaussian):
            c = float(np.real(complex(comp.mean[0]) * e))
            half = 12.0 * comp.sigma
        else:
            c = float(np.real(comp.center * e))
            half = comp.radius
        lo = min(lo, c - half)
        hi = max(hi, c + half)
    return lo - 1.0, hi + 1.0


def bisecting_line(p: MassSpec, direction: float) -> float:
    """Offset t with halfplane_measure(p, direction, t) = total/2.

    The offset-to-measure map is continuous and nondecreasing, so bracketed
    root finding on the support hull converges; the result is checked to
    bisect within 1e-9 of half the total.
    """
    if p.dim != 1:
        raise ValueError("bisecting_line needs a planar mass")
    total = p.total
    target = 0.5 * total
    lo, hi = _support_bracket(p, direction)

    def g(t):
        return halfplane_measure(p, direction, t) - target

    t = brentq(g, lo, hi, xtol=1e-13 * max(1.0, hi - lo), rtol=4.0 * np.finfo(float).eps)
    err = abs(halfplane_measure(p, direction, t) - target)
    if err > 1e-9 * total:
        raise RuntimeError(f"bisection residual {err:.3e} exceeds 1e-9 * total")
    return float(t)


def _fan_lines(p: MassSpec, gamma: float) -> tuple[np.ndarray, np.ndarray]:
    angles = gamma + np.array([0.0, np.pi / 3.0, 2.0 * np.pi / 3.0])
    offsets = np.array([bisecting_line(p, g) for g in angles])
    return angles, offsets


def _intersection(g1: float, t1: float, g2: float, t2: float) -> complex:
    det = np.cos(g1) * np.sin(g2) - np.sin(g1) * np.cos(g2)
    if abs(det) < 1e-6:
        raise RuntimeError("bisecting lines are near-parallel; intersection ill-conditioned")
    x = (t1 * np.sin(g2) - t2 * np.sin(g1)) / det
    y = (np.cos(g1) * t2 - np.cos(g2) * t1) / det
    return complex(x, y)


def _fan_gap(p: MassSpec, gamma: float) -> float:
    angles, offsets = _fan_lines(p, gamma)
    p1 = _intersection(angles[1], offsets[1], angles[2], offsets[2])
    return float(np.real(p1 * np.exp(-1j * angles[0])) - offsets[0])


def regular_six_fan(p: MassSpec, scan_points: int = 720) -> SixFan:
    """Find three concurrent lines, pi/3 apart, each bisecting the mass.

    Scans the base direction over [0, pi] for a sign change of the signed
    offset f (odd across pi, so one must exist), then bisects the angle down
    to ~1e-13. Raises :class:`FanScanError` with the scanned values if no
    sign change shows up, which would indicate a broken bisection oracle.
    """
    if p.dim != 1:
        raise ValueError("regular_six_fan needs a planar mass")
    if int(scan_points) < 8:
        raise ValueError("scan_points must be at least 8")
    grid = np.linspace(0.0, np.pi, int(scan_points) + 1)
    values = np.array([_fan_gap(p, g) for g in grid])

    root = None
    for k in range(len(grid) - 1):
        if values[k] == 0.0:
            root = grid[k]
            break
        if values[k] * values[k + 1] < 0.0:
            lo, hi = grid[k], grid[k + 1]
            flo = values[k]
            for _ in range(60):
                mid = 0.5 * (lo + hi)
                fmid = _fan_gap(p, mid)
                if fmid == 0.0:
                    break
                if flo * fmid < 0.0:
                    hi = mid
                else:
                    lo, flo = mid, fmid
                if hi - lo < 1e-13:
                    break
            root = 0.5 * (lo + hi)
            break
    if root is None:
        if values[-1] == 0.0:
            root = grid[-1]
        else:
            raise FanScanError(
                "no sign change of the fan offset over the half circle",
                angles=grid,
                values=values,
            )

    angles, offsets = _fan_lines(p, root)
    center = _intersection(angles[1], offsets[1], angles[2], offsets[2])
    total = p.total
    errors = tuple(
        float(abs(halfplane_measure(p, g, t) - 0.5 * total))
        for g, t in zip(angles, offsets)
    )
    lines = tuple(FanLine(direction=float(g), offset=float(t)) for g, t in zip(angles, offsets))
    gap = abs(float(np.real(center * np.exp(-1j * angles[0]))) - offsets[0])
    if gap > 1e-9 * max(1.0, abs(center)):
        raise RuntimeError(f"fan lines miss a common point by {gap:.3e}")
    return SixFan(
        center=center,
        base_angle=float(root),
        lines=lines,
        bisection_errors=errors,
    )


def worst_center_deviation(
    p: MassSpec, q: int, center: complex, grid_size: int = 256
) -> float:
    """max over the theta grid of |mu(S) - total/q| for sectors at the center."""
    q = check_q(q)
    n = check_grid_size(grid_size)
    x = Configuration.from_apex(center)
    theta = 2.0 * np.pi * np.arange(n) / n
    f = sector_measure(p, x, q, theta)
    return float(np.max(np.abs(f - p.total / q)))


def centerpoint_certificate(
    p: MassSpec, q: int, grid_size: int = 256, scan_points: int = 720
) -> CertificateReport:
    """Check the uniform q-sector deviation bound at a six-fan center.

    Only defined for q >= 3 (the fan argument gives nothing new for q = 2).
    The ceiling is max(1/q, (q-2)/2q) times the total mass; exceeding it by
    more than 1e-6 means the construction or the sector integrals are wrong,
    and the report says so rather than raising.
    """
    q = check_q(q)
    if q < 3:
        raise ValueError("the certificate applies to q >= 3")
    n = check_grid_size(grid_size)
    fan = regular_six_fan(p, scan_points=scan_points)
    x = Configuration.from_apex(fan.center)
    theta = 2.0 * np.pi * np.arange(n) / n
    total = p.total
    dev = np.abs(sector_measure(p, x, q, theta) - total / q)
    k = int(np.argmax(dev))
    linf = float(dev[k])
    bound = max(1.0 / q, (q - 2.0) / (2.0 * q)) * total
    return CertificateReport(
        q=q,
        center=fan.center,
        linf=linf,
        bound=bound,
        passed=bool(linf <= bound + 1e-6),
        worst_theta=float(theta[k]),
        grid_size=n,
        fan=fan,
    )


def _place_cluster(rng: np.random.Generator, lo: float, hi: float, n: int, delta: float):
    # n centers i.i.d. uniform in the delta-shrunk interval, redrawn until all
    # pairwise gaps clear 2 delta (possible since delta < 1/(2n)). If the
    # margin is too slim for rejection to finish, fall back to jittered even
    # spacing, which keeps the same disjointness guarantee.
    for _ in range(200):
        pts = np.sort(rng.uniform(lo + delta, hi - delta, size=n))
        if n == 1 or np.min(np.diff(pts)) > 2.0 * delta:
            return pts
    width = (hi - lo) / n
    jitter = max(0.0, 0.5 * width - delta) * 0.98
    base = lo + (np.arange(n) + 0.5) * width
    return base + rng.uniform(-jitter, jitter, size=n)


def adversarial_mass(spec: AdversarialSpec, seed) -> PlanarMassSpec:
    """Two clusters of n tiny disks each, total mass 1, disjoint by spacing."""
    rng = check_rng(seed)
    left = _place_cluster(rng, -spec.r - 1.0, -spec.r, spec.n, spec.delta)
    right = _place_cluster(rng, spec.r, spec.r + 1.0, spec.n, spec.delta)
    weight = 1.0 / (2 * spec.n)
    comps = [
        Disk(center=complex(c, 0.0), radius=spec.delta, weight=weight)
        for c in np.concatenate([left, right])
    ]
    return PlanarMassSpec(comps)
