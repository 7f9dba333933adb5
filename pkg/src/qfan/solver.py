"""Finding configurations whose prescribed sector coefficients vanish.

Given masses mu_1, ..., mu_d on C^d and positive exponents m_1, ..., m_d,
this module minimizes

    residual(x) = sqrt( sum_j |c_{j, m_j}(x)|^2 )

over unit configurations x in C^(d+1), where c_{j,m} are the Fourier
coefficients of the sector-measure profile of mu_j. A zero of the residual is
a hyperplane witnessing the simultaneous coefficient annihilation; conjugate
coefficients vanish along with it since the profiles are real.

The residual is invariant under x -> e^{i phi} x (coefficients only change by
the character e^{i m phi}), so the search space is really the quotient of the
sphere by a circle. Rather than building global charts of that quotient, each
iterate fixes the gauge locally: the largest-magnitude coordinate is rotated
to be real positive, dropped, and the remaining coordinates divided by it,
giving an affine chart with 2d real parameters. A derivative-free simplex
descent runs first (the objective is smooth but gradients are only available
through finite differences at quadrature accuracy), then Levenberg-Marquardt
polishes the 2d real components (Re c_j, Im c_j).

Multistart points are drawn uniformly from the sphere, rejecting starts with
||a|| < 0.1: the degenerate locus a = 0 provably carries no zero (its
coefficient magnitudes are total |sin(m pi / q)| / (pi m) > 0 off the
multiples of q), so nothing is lost by steering clear of it.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import least_squares, minimize

from ._validation import check_grid_size, check_q, check_rng
from .fourier import DeviationReport, coefficient, deviation_report, profile
from .measures import Configuration, MassSpec

__all__ = [
    "SolveProblem",
    "SolveResult",
    "HyperplaneDesc",
    "StartTrace",
    "residual",
    "residual_components",
    "solve",
    "hyperplane_of",
]


@dataclass(frozen=True)
class SolveProblem:
    """One annihilation instance: d masses on C^d with one exponent each."""

    masses: tuple[MassSpec, ...]
    exponents: tuple[int, ...]
    q: int
    grid_size: int = 256
    tol: float = 1e-6
    starts: int = 32
    seed: int = 0

    def __post_init__(self):
        masses = tuple(self.masses)
        exponents = tuple(int(e) for e in self.exponents)
        object.__setattr__(self, "masses", masses)
        object.__setattr__(self, "exponents", exponents)
        object.__setattr__(self, "q", check_q(self.q))
        object.__setattr__(self, "grid_size", check_grid_size(self.grid_size))
        if not masses:
            raise ValueError("at least one mass is required")
        dims = {m.dim for m in masses}
        if len(dims) != 1:
            raise ValueError(f"masses disagree on dimension: {sorted(dims)}")
        d = dims.pop()
        if len(masses) != d:
            raise ValueError(
                f"need exactly d masses on C^d, got {len(masses)} masses of dimension {d}"
            )
        if len(exponents) != d:
            raise ValueError(f"need {d} exponents, got {len(exponents)}")
        if any(e <= 0 for e in exponents):
            raise ValueError(f"exponents must be positive, got {exponents}")
        if max(exponents) >= self.grid_size / 8:
            raise ValueError(
                f"grid size {self.grid_size} too small for exponent {max(exponents)}; "
                "need m < N/8"
            )
        if not (0.0 < float(self.tol) < 1.0):
            raise ValueError(f"tol must be in (0, 1), got {self.tol}")
        object.__setattr__(self, "tol", float(self.tol))
        if int(self.starts) < 1:
            raise ValueError("starts must be at least 1")
        object.__setattr__(self, "starts", int(self.starts))

    @property
    def dim(self) -> int:
        return len(self.masses)

    @property
    def tol_abs(self) -> float:
        return self.tol * max(m.total for m in self.masses)


@dataclass(frozen=True)
class HyperplaneDesc:
    """A hyperplane {u : <u, a> + conj(b) = 0} with its planar apex if d=1."""

    a: np.ndarray
    b: complex
    apex: complex | None


@dataclass(frozen=True)
class StartTrace:
    """Diagnostics of one multistart attempt."""

    index: int
    start: np.ndarray = field(repr=False)
    residual: float
    nfev: int
    converged: bool


@dataclass(frozen=True)
class SolveResult:
    x: Configuration
    residual: float
    converged: bool
    hyperplane: HyperplaneDesc | None
    coefficients: tuple[complex, ...]
    per_mass: tuple[DeviationReport, ...]
    witnesses: tuple[Configuration, ...]
    trace: tuple[StartTrace, ...]
    problem: SolveProblem


def residual_components(p: SolveProblem, x: Configuration) -> np.ndarray:
    """The complex vector (c_{1,m_1}(x), ..., c_{d,m_d}(x))."""
    return np.array(
        [
            coefficient(profile(m, x, p.q, p.grid_size), e)
            for m, e in zip(p.masses, p.exponents)
        ]
    )


def residual(p: SolveProblem, x: Configuration) -> float:
    """Euclidean norm of the prescribed coefficient vector at x."""
    return float(np.linalg.norm(residual_components(p, x)))


def hyperplane_of(x: Configuration) -> HyperplaneDesc:
    """Hyperplane data of a non-degenerate configuration."""
    if x.is_degenerate:
        raise ValueError("degenerate configuration does not define a hyperplane")
    apex = complex(x.apex()) if x.dim == 1 else None
    return HyperplaneDesc(a=x.a.copy(), b=x.b, apex=apex)


# --- chart machinery ---------------------------------------------------------


def _gauge_fixed(v: np.ndarray) -> tuple[np.ndarray, int]:
    v = v / np.linalg.norm(v)
    i0 = int(np.argmax(np.abs(v)))
    phase = v[i0] / abs(v[i0])
    return v / phase, i0


def _to_chart(v: np.ndarray, i0: int) -> np.ndarray:
    w = np.delete(v, i0) / v[i0]
    return np.concatenate([w.real, w.imag])


def _from_chart(w_real: np.ndarray, i0: int) -> np.ndarray:
    k = w_real.size // 2
    w = w_real[:k] + 1j * w_real[k:]
    v = np.insert(w, i0, 1.0 + 0.0j)
    return v / np.linalg.norm(v)


def _config(v: np.ndarray) -> Configuration:
    return Configuration(a=v[:-1], b=complex(v[-1]))


def _random_start(rng: np.random.Generator, dim: int) -> np.ndarray:
    # Uniform on the sphere of C^(dim+1); reject near-degenerate a.
    while True:
        v = rng.normal(size=dim + 1) + 1j * rng.normal(size=dim + 1)
        v /= np.linalg.norm(v)
        if np.linalg.norm(v[:-1]) >= 0.1:
            return v


def _refine_start(p: SolveProblem, v0: np.ndarray) -> tuple[np.ndarray, float, int]:
    """Simplex descent then Levenberg-Marquardt from one start vector."""
    dim_real = 2 * p.dim
    nfev = 0

    def scalar_obj(w, i0):
        return residual(p, _config(_from_chart(w, i0)))

    v, i0 = _gauge_fixed(v0)
    nm = minimize(
        scalar_obj,
        _to_chart(v, i0),
        args=(i0,),
        method="Nelder-Mead",
        options={
            "maxfev": 300 * p.dim + 200,
            "xatol": 1e-10,
            "fatol": 1e-3 * p.tol_abs,
            "adaptive": p.dim > 1,
        },
    )
    nfev += int(nm.nfev)
    v_nm = _from_chart(nm.x, i0)
    res_nm = float(nm.fun)

    def vector_obj(w, i1):
        c = residual_components(p, _config(_from_chart(w, i1)))
        return np.concatenate([c.real, c.imag])

    # Re-fix the gauge where the simplex ended before polishing.
    v1, i1 = _gauge_fixed(v_nm)
    ls = least_squares(
        vector_obj,
        _to_chart(v1, i1),
        args=(i1,),
        method="lm",
        xtol=1e-15,
        ftol=1e-15,
        gtol=1e-15,
        max_nfev=120 * dim_real,
    )
    nfev += int(ls.nfev) * (dim_real + 1)
    v_final = _from_chart(ls.x, i1)
    res_final = residual(p, _config(v_final))
    # Keep whichever stage actually did better; LM can wander off a shallow
    # basin that the simplex had already reached.
    if res_nm < res_final:
        return v_nm, res_nm, nfev
    return v_final, res_final, nfev


def _distinct(witnesses: list[np.ndarray], v: np.ndarray) -> bool:
    return all(abs(np.vdot(w, v)) < 0.999 for w in witnesses)


def solve(p: SolveProblem, explore_all: bool = False) -> SolveResult:
    """Run the multistart search for an annihilating configuration.

    Deterministic for a fixed problem (seed included). Stops at the first
    converged start unless ``explore_all`` is set, in which case every start
    runs and all distinct converged witnesses are collected (the existence
    guarantee says nothing about uniqueness). A run with no converged start
    returns the best iterate flagged ``converged=False`` with the full trace;
    that outcome is reportable, never an exception.
    """
    rng = check_rng(p.seed)
    tol_abs = p.tol_abs
    traces: list[StartTrace] = []
    witness_vecs: list[np.ndarray] = []
    best_v: np.ndarray | None = None
    best_res = np.inf

    for index in range(p.starts):
        v0 = _random_start(rng, p.dim)
        v, res, nfev = _refine_start(p, v0)
        ok = res <= tol_abs
        traces.append(
            StartTrace(index=index, start=v0, residual=res, nfev=nfev, converged=ok)
        )
        if res < best_res:
            best_res, best_v = res, v
        if ok and _distinct(witness_vecs, v):
            witness_vecs.append(v)
        if ok and not explore_all:
            break

    x = _config(best_v)
    converged = best_res <= tol_abs
    coeffs = residual_components(p, x)
    if x.is_degenerate:
        hyperplane = None
        per_mass: tuple[DeviationReport, ...] = ()
    else:
        hyperplane = hyperplane_of(x)
        per_mass = tuple(
            deviation_report(
                profile(m, x, p.q, p.grid_size),
                annihilated=(e,) if converged else (),
            )
            for m, e in zip(p.masses, p.exponents)
        )
    return SolveResult(
        x=x,
        residual=float(best_res),
        converged=bool(converged),
        hyperplane=hyperplane,
        coefficients=tuple(complex(c) for c in coeffs),
        per_mass=per_mass,
        witnesses=tuple(_config(w) for w in witness_vecs),
        trace=tuple(traces),
        problem=p,
    )
