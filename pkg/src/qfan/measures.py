"""Mass specifications on C^d and their regular q-sector measures.

A mass is a finite, absolutely continuous measure given as a weighted mixture
of isotropic Gaussians (any dimension) and uniform disks (dimension one). A
configuration x = (a, b), a unit vector in C^(d+1), determines the affine map

    pi_x(u) = <u, a> + conj(b)        (<u, a> = sum_i u_i conj(a_i))

whose zero set is the hyperplane H(x), and the regular q-sector at angle
theta is the preimage of the closed planar wedge of half-angle pi/q about
the direction e^{i theta}:

    S(x, q, theta) = { u : pi_x(u) in e^{i theta} W(q) }.

Sector measures reduce exactly to planar wedge masses of the pushforward of
the mixture under pi_x, which stays in the same component family: Gaussians
map to planar Gaussians, disks to disks. Configurations with a = 0 are
degenerate: pi_x is constant, so every sector holds either all of the mass or
none of it depending on whether theta + arg(b) lies within pi/q of zero.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import NamedTuple, Union

import numpy as np

from ._kernels import disk_wedge_area, gaussian_wedge_prob, gaussian_wedge_prob_quad
from ._validation import (
    as_complex_vector,
    check_positive,
    check_q,
    check_rng,
    wrap_angle,
)

__all__ = [
    "DEGENERATE_TOL",
    "MeasureError",
    "DegenerateConfigurationError",
    "Gaussian",
    "Disk",
    "MassSpec",
    "PlanarMassSpec",
    "Configuration",
    "MonteCarloEstimate",
    "total_mass",
    "pushforward_planar",
    "wedge_measure",
    "sector_measure",
    "sector_contains",
    "monte_carlo_sector_measure",
    "sample",
    "mass_to_dict",
    "mass_from_dict",
    "load_masses",
    "save_masses",
    "config_to_dict",
    "config_from_dict",
]

#: Below this value of ||a|| a configuration is treated as degenerate.
DEGENERATE_TOL = 1e-10


class MeasureError(ValueError):
    """Invalid mass specification (construction or serialization)."""


class DegenerateConfigurationError(ValueError):
    """Operation that requires a genuine hyperplane got a degenerate x."""


@dataclass(frozen=True, eq=False)
class Gaussian:
    """Isotropic Gaussian component: N(mean, sigma^2 I) with a weight.

    ``sigma`` is the standard deviation of every real coordinate, so in the
    plane the density is w/(2 pi sigma^2) exp(-|z - mean|^2 / (2 sigma^2)).
    """

    mean: np.ndarray
    sigma: float
    weight: float = 1.0

    def __post_init__(self):
        mean = as_complex_vector(self.mean, name="mean")
        mean.setflags(write=False)
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "sigma", check_positive("sigma", self.sigma))
        object.__setattr__(self, "weight", check_positive("weight", self.weight))

    @property
    def dim(self) -> int:
        return self.mean.shape[0]


@dataclass(frozen=True)
class Disk:
    """Uniform measure of given weight on a planar disk (dimension one only)."""

    center: complex
    radius: float
    weight: float = 1.0

    def __post_init__(self):
        center = complex(self.center)
        if not (np.isfinite(center.real) and np.isfinite(center.imag)):
            raise ValueError("center must be finite")
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "radius", check_positive("radius", self.radius))
        object.__setattr__(self, "weight", check_positive("weight", self.weight))

    @property
    def dim(self) -> int:
        return 1


Component = Union[Gaussian, Disk]


class MassSpec:
    """A finite mixture of components on C^dim.

    Immutable after construction. Disk components are only meaningful in the
    plane, so they force ``dim == 1``.
    """

    __slots__ = ("components", "dim")

    def __init__(self, components, dim: int | None = None):
        components = tuple(components)
        if not components:
            raise MeasureError("a mass needs at least one component")
        dims = set()
        for i, comp in enumerate(components):
            if not isinstance(comp, (Gaussian, Disk)):
                raise MeasureError(f"component {i}: expected Gaussian or Disk, got {comp!r}")
            dims.add(comp.dim)
        if len(dims) > 1:
            raise MeasureError(f"components disagree on dimension: {sorted(dims)}")
        inferred = dims.pop()
        if dim is not None and int(dim) != inferred:
            raise MeasureError(f"dim={dim} but components live in dimension {inferred}")
        if inferred != 1 and any(isinstance(c, Disk) for c in components):
            raise MeasureError("disk components are only supported in dimension 1")
        object.__setattr__(self, "components", components)
        object.__setattr__(self, "dim", inferred)

    def __setattr__(self, name, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    @property
    def total(self) -> float:
        return float(sum(c.weight for c in self.components))

    def __repr__(self):
        return f"{type(self).__name__}(dim={self.dim}, components={list(self.components)!r})"


class PlanarMassSpec(MassSpec):
    """A mass on the plane (dimension fixed to one)."""

    def __init__(self, components):
        super().__init__(components, dim=1)


def total_mass(m: MassSpec) -> float:
    """Total weight of the mixture."""
    return m.total


@dataclass(frozen=True, eq=False)
class Configuration:
    """A point x = (a, b) of the unit sphere in C^(d+1), normalized on entry."""

    a: np.ndarray
    b: complex

    def __post_init__(self):
        a = as_complex_vector(self.a, name="a")
        b = complex(self.b)
        if not (np.isfinite(b.real) and np.isfinite(b.imag)):
            raise ValueError("b must be finite")
        norm = float(np.sqrt(np.sum(np.abs(a) ** 2) + abs(b) ** 2))
        if not np.isfinite(norm) or norm == 0.0:
            raise ValueError("configuration vector must be nonzero and finite")
        a = a / norm
        a.setflags(write=False)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b / norm)

    @property
    def dim(self) -> int:
        return self.a.shape[0]

    @property
    def is_degenerate(self) -> bool:
        return float(np.linalg.norm(self.a)) < DEGENERATE_TOL

    def project(self, u):
        """Apply pi_x to a point (shape (d,)) or batch (n, d) of points."""
        u = np.asarray(u, dtype=complex)
        if u.ndim == 0:
            u = u[None]
        if u.shape[-1] != self.dim:
            raise ValueError(f"points must have last dimension {self.dim}, got {u.shape}")
        return u @ np.conj(self.a) + np.conj(self.b)

    def apex(self) -> complex:
        """The single point of H(x) in the plane (dimension one only)."""
        if self.dim != 1:
            raise ValueError("apex is only defined in dimension 1")
        if self.is_degenerate:
            raise DegenerateConfigurationError("degenerate configuration has no apex")
        return complex(-np.conj(self.b) / np.conj(self.a[0]))

    @classmethod
    def from_apex(cls, apex: complex) -> "Configuration":
        """Planar configuration whose hyperplane is the given apex point."""
        apex = complex(apex)
        return cls(a=np.array([1.0 + 0.0j]), b=-np.conj(apex))

    @classmethod
    def from_vector(cls, v) -> "Configuration":
        v = as_complex_vector(v, name="configuration vector")
        if v.shape[0] < 2:
            raise ValueError("configuration vector needs at least 2 entries")
        return cls(a=v[:-1], b=complex(v[-1]))

    def as_vector(self) -> np.ndarray:
        return np.concatenate([self.a, [self.b]])

    def rotate(self, phase: float) -> "Configuration":
        """The configuration e^{i phase} x (same hyperplane, rotated sectors)."""
        lam = np.exp(1j * float(phase))
        return Configuration(a=self.a * lam, b=self.b * lam)

    def __repr__(self):
        return f"Configuration(a={self.a!r}, b={self.b!r})"


def pushforward_planar(m: MassSpec, x: Configuration) -> PlanarMassSpec:
    """Image of the mass under pi_x, as a planar mass of the same family.

    Gaussians map to Gaussians: the complex-linear functional pi_x is, in real
    coordinates, a pair of orthogonal projections of equal length ||a||, so
    N(mu, sigma^2 I) lands on N(pi_x(mu), (sigma ||a||)^2 I). Disks scale by
    |a| and translate. Weights are preserved.
    """
    if m.dim != x.dim:
        raise ValueError(f"mass lives on C^{m.dim} but configuration on C^{x.dim}")
    if x.is_degenerate:
        raise DegenerateConfigurationError(
            "pushforward collapses to a point mass for degenerate x"
        )
    scale = float(np.linalg.norm(x.a))
    out = []
    for comp in m.components:
        if isinstance(comp, Gaussian):
            mean = complex(np.sum(comp.mean * np.conj(x.a)) + np.conj(x.b))
            out.append(Gaussian(mean=[mean], sigma=comp.sigma * scale, weight=comp.weight))
        else:
            center = complex(comp.center * np.conj(x.a[0]) + np.conj(x.b))
            out.append(Disk(center=center, radius=comp.radius * scale, weight=comp.weight))
    return PlanarMassSpec(out)


def _planar_gaussian_mean(comp: Gaussian) -> complex:
    return complex(comp.mean[0])


def wedge_measure(p: MassSpec, q: int, theta, method: str = "exact"):
    """Mass of the planar wedge of half-angle pi/q about direction theta.

    ``theta`` may be a scalar or an array; the result matches its shape. The
    default route uses closed forms (normal CDF geometry for Gaussians, exact
    circular areas for disks). ``method="quadrature"`` switches the Gaussian
    components to an independent adaptive radial-angular integration, useful
    as a slow cross-check.
    """
    if p.dim != 1:
        raise ValueError("wedge_measure needs a planar mass")
    q = check_q(q)
    if method not in ("exact", "quadrature"):
        raise ValueError(f"unknown method {method!r}")
    theta_arr = np.asarray(theta, dtype=float)
    out = np.zeros(theta_arr.shape)
    for comp in p.components:
        if isinstance(comp, Gaussian):
            mu = _planar_gaussian_mean(comp)
            if method == "exact":
                out = out + comp.weight * gaussian_wedge_prob(mu, comp.sigma, q, theta_arr)
            else:
                vals = [
                    gaussian_wedge_prob_quad(mu, comp.sigma, q, t)
                    for t in np.atleast_1d(theta_arr)
                ]
                out = out + comp.weight * np.reshape(vals, theta_arr.shape)
        else:
            area = disk_wedge_area(comp.center, comp.radius, q, theta_arr)
            out = out + comp.weight * area / (np.pi * comp.radius**2)
    return out if out.ndim else float(out)


def _degenerate_indicator(x: Configuration, q: int, theta):
    # With a = 0 the sector is everything or nothing: all of C^d exactly when
    # |theta + arg b| <= pi/q modulo 2 pi.
    offset = wrap_angle(np.asarray(theta, dtype=float) + np.angle(x.b))
    return np.abs(offset) <= np.pi / q


def sector_measure(m: MassSpec, x: Configuration, q: int, theta):
    """Measure of the regular q-sector S(x, q, theta) under the mass.

    Vectorized over ``theta``. Degenerate configurations return the total
    mass or zero according to the all-or-nothing rule.
    """
    q = check_q(q)
    if m.dim != x.dim:
        raise ValueError(f"mass lives on C^{m.dim} but configuration on C^{x.dim}")
    if x.is_degenerate:
        ind = _degenerate_indicator(x, q, theta)
        out = m.total * ind.astype(float)
        return out if out.ndim else float(out)
    return wedge_measure(pushforward_planar(m, x), q, theta)


def sector_contains(x: Configuration, q: int, theta: float, u) -> np.ndarray | bool:
    """Membership of points in the closed sector S(x, q, theta).

    ``u`` is a point of C^d (shape (d,)) or a batch (n, d). Points on the
    hyperplane itself belong to every sector (the wedge is closed and
    contains its corner).
    """
    q = check_q(q)
    theta = float(theta)
    if x.is_degenerate:
        inside = bool(_degenerate_indicator(x, q, theta))
        u = np.asarray(u, dtype=complex)
        shape = u.shape[:-1] if u.ndim > 1 else ()
        out = np.full(shape, inside)
        return out if out.ndim else bool(out)
    u = np.asarray(u, dtype=complex)
    v = x.project(u)
    # Points of H(x) project to zero only up to roundoff; anything within the
    # evaluation noise of pi_x counts as on the hyperplane (and the wedge is
    # closed, so they belong to every sector).
    tol = 1e-12 * (1.0 + np.sum(np.abs(u), axis=-1))
    on_plane = np.abs(v) <= tol
    inside = np.abs(wrap_angle(np.angle(v) - theta)) <= np.pi / q
    out = on_plane | inside
    return out if out.ndim else bool(out)


class MonteCarloEstimate(NamedTuple):
    """Sampling estimate with its standard error."""

    value: float
    stderr: float
    n: int


def sample(m: MassSpec, n: int, seed) -> np.ndarray:
    """Draw n points of C^dim from the normalized mixture, shape (n, dim)."""
    rng = check_rng(seed)
    n = int(n)
    if n <= 0:
        raise ValueError("sample count must be positive")
    weights = np.array([c.weight for c in m.components])
    counts = rng.multinomial(n, weights / weights.sum())
    blocks = []
    for comp, k in zip(m.components, counts):
        if k == 0:
            continue
        if isinstance(comp, Gaussian):
            z = rng.normal(size=(k, comp.dim)) + 1j * rng.normal(size=(k, comp.dim))
            blocks.append(comp.mean[None, :] + comp.sigma * z)
        else:
            r = comp.radius * np.sqrt(rng.uniform(size=k))
            ang = rng.uniform(0.0, 2.0 * np.pi, size=k)
            blocks.append((comp.center + r * np.exp(1j * ang))[:, None])
    return np.concatenate(blocks, axis=0)


def monte_carlo_sector_measure(
    m: MassSpec, x: Configuration, q: int, theta: float, n: int, seed
) -> MonteCarloEstimate:
    """Estimate sector_measure by direct sampling. Deterministic per seed."""
    pts = sample(m, n, seed)
    hits = sector_contains(x, q, theta, pts)
    frac = float(np.mean(hits))
    total = m.total
    return MonteCarloEstimate(
        value=total * frac,
        stderr=total * float(np.sqrt(frac * (1.0 - frac) / n)),
        n=int(n),
    )


# --- serialization ----------------------------------------------------------
#
# File format: {"dim": d, "components": [...]} with complex numbers always as
# [re, im] pairs; Gaussian means are lists of pairs, one per coordinate.


def _pair(z: complex) -> list[float]:
    z = complex(z)
    return [float(z.real), float(z.imag)]


def _from_pair(obj, where: str) -> complex:
    if (
        not isinstance(obj, (list, tuple))
        or len(obj) != 2
        or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in obj)
    ):
        raise MeasureError(f"{where}: expected a [re, im] pair, got {obj!r}")
    return complex(float(obj[0]), float(obj[1]))


def mass_to_dict(m: MassSpec) -> dict:
    comps = []
    for comp in m.components:
        if isinstance(comp, Gaussian):
            comps.append(
                {
                    "type": "gaussian",
                    "mean": [_pair(z) for z in comp.mean],
                    "sigma": comp.sigma,
                    "weight": comp.weight,
                }
            )
        else:
            comps.append(
                {
                    "type": "disk",
                    "center": _pair(comp.center),
                    "radius": comp.radius,
                    "weight": comp.weight,
                }
            )
    return {"dim": m.dim, "components": comps}


def _number(obj, where: str) -> float:
    if not isinstance(obj, (int, float)) or isinstance(obj, bool):
        raise MeasureError(f"{where}: expected a number, got {obj!r}")
    return float(obj)


def mass_from_dict(data, where: str = "measure") -> MassSpec:
    if not isinstance(data, dict):
        raise MeasureError(f"{where}: expected an object, got {type(data).__name__}")
    if "dim" not in data or "components" not in data:
        raise MeasureError(f"{where}: missing required field 'dim' or 'components'")
    dim = data["dim"]
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise MeasureError(f"{where}.dim: expected a positive integer, got {dim!r}")
    raw = data["components"]
    if not isinstance(raw, list) or not raw:
        raise MeasureError(f"{where}.components: expected a non-empty list")
    comps = []
    for i, c in enumerate(raw):
        loc = f"{where}.components[{i}]"
        if not isinstance(c, dict):
            raise MeasureError(f"{loc}: expected an object")
        kind = c.get("type")
        try:
            if kind == "gaussian":
                mean = c.get("mean")
                if not isinstance(mean, list) or not mean:
                    raise MeasureError(f"{loc}.mean: expected a list of [re, im] pairs")
                vec = [_from_pair(z, f"{loc}.mean[{j}]") for j, z in enumerate(mean)]
                comps.append(
                    Gaussian(
                        mean=vec,
                        sigma=_number(c.get("sigma"), f"{loc}.sigma"),
                        weight=_number(c.get("weight", 1.0), f"{loc}.weight"),
                    )
                )
            elif kind == "disk":
                comps.append(
                    Disk(
                        center=_from_pair(c.get("center"), f"{loc}.center"),
                        radius=_number(c.get("radius"), f"{loc}.radius"),
                        weight=_number(c.get("weight", 1.0), f"{loc}.weight"),
                    )
                )
            else:
                raise MeasureError(f"{loc}.type: expected 'gaussian' or 'disk', got {kind!r}")
        except (TypeError, ValueError) as exc:
            if isinstance(exc, MeasureError):
                raise
            raise MeasureError(f"{loc}: {exc}") from exc
    try:
        spec = MassSpec(comps, dim=dim)
    except MeasureError as exc:
        raise MeasureError(f"{where}: {exc}") from exc
    if spec.dim == 1:
        return PlanarMassSpec(spec.components)
    return spec


def load_masses(path) -> list[MassSpec]:
    """Read one measure or a list of measures from a JSON file."""
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise MeasureError(
                f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
            ) from exc
    if isinstance(data, dict):
        data = [data]
    if not isinstance(data, list) or not data:
        raise MeasureError(f"{path}: expected a measure object or a non-empty list of them")
    return [mass_from_dict(d, where=f"{path}[{i}]") for i, d in enumerate(data)]


def save_masses(masses, path) -> None:
    """Write a list of measures (or a single one) as JSON."""
    if isinstance(masses, MassSpec):
        payload = mass_to_dict(masses)
    else:
        payload = [mass_to_dict(m) for m in masses]
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def config_to_dict(x: Configuration) -> dict:
    return {"a": [_pair(z) for z in x.a], "b": _pair(x.b)}


def config_from_dict(data, where: str = "configuration") -> Configuration:
    if not isinstance(data, dict) or "a" not in data or "b" not in data:
        raise MeasureError(f"{where}: expected an object with fields 'a' and 'b'")
    a = data["a"]
    if not isinstance(a, list) or not a:
        raise MeasureError(f"{where}.a: expected a non-empty list of [re, im] pairs")
    avec = [_from_pair(z, f"{where}.a[{j}]") for j, z in enumerate(a)]
    return Configuration(a=np.array(avec), b=_from_pair(data["b"], f"{where}.b"))
