"""Command-line front end: solve, verify, scan, fan6, adversarial, certify, tailsum.

Structured results go to JSON, grid data to CSV; every output carries (or is
accompanied by) a manifest with the exact options, seed, grid sizes, and
library versions, so a run can be reproduced bit for bit. Exit codes are a
stable contract:

    0  success
    1  input error (bad flags, malformed measure files, dimension mismatch)
    2  solver did not converge
    3  a verified bound was violated (which would indicate an implementation
       bug, not a counterexample)
"""

from __future__ import annotations

import argparse
import csv
import json
import platform
import sys
from dataclasses import asdict, dataclass, field

import numpy as np
import scipy

from ._validation import check_grid_size
from ._version import __version__
from .fan import (
    AdversarialSpec,
    adversarial_mass,
    centerpoint_certificate,
    regular_six_fan,
    worst_center_deviation,
)
from .fourier import deviation_report, profile, tail_sum
from .measures import (
    Configuration,
    Gaussian,
    MassSpec,
    MeasureError,
    config_from_dict,
    config_to_dict,
    load_masses,
    save_masses,
    sector_measure,
)
from .solver import SolveProblem, solve

__all__ = ["main", "RunConfig"]

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_NOT_CONVERGED = 2
EXIT_VIOLATION = 3


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on usage errors, which collides with the
    # not-converged code; route every input problem to 1 instead.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


@dataclass(frozen=True)
class RunConfig:
    """Validated invocation: one subcommand plus its options."""

    subcommand: str
    measures: tuple[str, ...] = ()
    q: int | None = None
    exponents: tuple[int, ...] | None = None
    grid: int = 256
    starts: int = 32
    seed: int = 0
    tol: float = 1e-6
    out: str | None = None
    extras: dict = field(default_factory=dict)


_CORE_FIELDS = ("subcommand", "measures", "q", "exponents", "grid", "starts", "seed", "tol", "out")


def _run_config(ns: argparse.Namespace) -> RunConfig:
    data = vars(ns).copy()
    core = {}
    for name in _CORE_FIELDS:
        if name in data:
            core[name] = data.pop(name)
    if "measures" in core and isinstance(core["measures"], str):
        core["measures"] = (core["measures"],)
    return RunConfig(**core, extras=data)


def _manifest(cfg: RunConfig) -> dict:
    options = {k: v for k, v in asdict(cfg).items() if k != "extras"}
    options.update(cfg.extras)
    return {
        "tool": "qfan",
        "version": __version__,
        "options": options,
        "environment": {
            "python": platform.python_version(),
            "numpy": np.__version__,
            "scipy": scipy.__version__,
        },
    }


def _pair(z: complex) -> list[float]:
    z = complex(z)
    return [float(z.real), float(z.imag)]


def _write_json(path: str, payload: dict) -> None:
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def _write_sidecar_manifest(path: str, cfg: RunConfig, extra: dict | None = None) -> None:
    data = _manifest(cfg)
    if extra:
        data["summary"] = extra
    _write_json(path + ".manifest.json", data)


def _parse_complex(text: str, what: str) -> complex:
    parts = text.split(",")
    if len(parts) != 2:
        raise MeasureError(f"{what}: expected 're,im', got {text!r}")
    try:
        return complex(float(parts[0]), float(parts[1]))
    except ValueError as exc:
        raise MeasureError(f"{what}: {exc}") from exc


def _parse_exponents(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(p) for p in text.split(","))
    except ValueError as exc:
        raise MeasureError(f"exponents: expected comma-separated integers, got {text!r}") from exc


def _load_configuration(cfg: RunConfig) -> Configuration:
    apex = cfg.extras.get("apex")
    config_path = cfg.extras.get("config")
    if (apex is None) == (config_path is None):
        raise MeasureError("provide exactly one of --apex or --config")
    if apex is not None:
        return Configuration.from_apex(_parse_complex(apex, "--apex"))
    with open(config_path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise MeasureError(
                f"{config_path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
            ) from exc
    return config_from_dict(data, where=config_path)


def _report_dict(rep) -> dict:
    data = asdict(rep)
    data["annihilated"] = list(data["annihilated"])
    return data


# --- subcommands -------------------------------------------------------------


def cmd_solve(cfg: RunConfig) -> int:
    masses = load_masses(cfg.measures[0])
    exponents = cfg.exponents if cfg.exponents is not None else (1,) * len(masses)
    problem = SolveProblem(
        masses=tuple(masses),
        exponents=exponents,
        q=cfg.q,
        grid_size=cfg.grid,
        tol=cfg.tol,
        starts=cfg.starts,
        seed=cfg.seed,
    )
    result = solve(problem, explore_all=bool(cfg.extras.get("explore_all")))
    payload = {
        "manifest": _manifest(cfg),
        "converged": result.converged,
        "residual": result.residual,
        "x": config_to_dict(result.x),
        "apex": _pair(result.hyperplane.apex)
        if result.hyperplane is not None and result.hyperplane.apex is not None
        else None,
        "coefficients": [_pair(c) for c in result.coefficients],
        "per_mass": [_report_dict(rep) for rep in result.per_mass],
        "witnesses": [config_to_dict(w) for w in result.witnesses],
        "trace": [
            {
                "index": t.index,
                "residual": t.residual,
                "nfev": t.nfev,
                "converged": t.converged,
            }
            for t in result.trace
        ],
    }
    _write_json(cfg.out, payload)
    if not result.converged:
        print(f"not converged: residual {result.residual:.3e}", file=sys.stderr)
        return EXIT_NOT_CONVERGED
    print(f"converged: residual {result.residual:.3e} -> {cfg.out}")
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    masses = load_masses(cfg.measures[0])
    n = int(cfg.extras.get("n") or 1)
    if n < 1:
        raise MeasureError("--n must be at least 1")
    k = len(masses)
    dim = masses[0].dim
    if dim != k * n:
        raise MeasureError(
            f"verification with n={n} needs {k} measures of dimension {k * n}, "
            f"got dimension {dim}"
        )
    stacked = tuple(m for m in masses for _ in range(n))
    exponents = tuple(e for _ in masses for e in range(1, n + 1))
    problem = SolveProblem(
        masses=stacked,
        exponents=exponents,
        q=cfg.q,
        grid_size=cfg.grid,
        tol=cfg.tol,
        starts=cfg.starts,
        seed=cfg.seed,
    )
    result = solve(problem)
    rows = []
    violation = False
    if result.converged:
        for i, m in enumerate(masses):
            prof = profile(m, result.x, problem.q, problem.grid_size)
            rep = deviation_report(prof, annihilated=range(1, n + 1))
            l2_ok = rep.l2 <= rep.bound_l2 + 1e-6
            linf_ok = (
                bool(rep.linf <= rep.bound_linf + 1e-6) if rep.acceleration_reliable else None
            )
            violation = violation or not l2_ok or linf_ok is False
            row = _report_dict(rep)
            row.update({"measure": i, "l2_ok": bool(l2_ok), "linf_ok": linf_ok})
            rows.append(row)
    payload = {
        "manifest": _manifest(cfg),
        "converged": result.converged,
        "residual": result.residual,
        "x": config_to_dict(result.x),
        "n": n,
        "per_measure": rows,
    }
    _write_json(cfg.out, payload)
    if not result.converged:
        print(f"not converged: residual {result.residual:.3e}", file=sys.stderr)
        return EXIT_NOT_CONVERGED
    if violation:
        print("bound violation detected; see report", file=sys.stderr)
        return EXIT_VIOLATION
    print(f"all bounds hold for {k} measure(s) -> {cfg.out}")
    return EXIT_OK


def cmd_scan(cfg: RunConfig) -> int:
    masses = load_masses(cfg.measures[0])
    x = _load_configuration(cfg)
    n = check_grid_size(cfg.grid)
    profiles = [profile(m, x, cfg.q, n) for m in masses]
    theta = profiles[0].grid
    with open(cfg.out, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["theta"] + [f"f_{i}" for i in range(len(profiles))])
        for k in range(n):
            writer.writerow([f"{theta[k]:.17g}"] + [f"{p.samples[k]:.17g}" for p in profiles])
    coeffs_path = cfg.extras.get("coeffs")
    if coeffs_path:
        with open(coeffs_path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["measure", "m", "re_c", "im_c", "abs_c"])
            for i, p in enumerate(profiles):
                for m in range(n // 2 + 1):
                    c = p.coefficients[m]
                    writer.writerow(
                        [i, m, f"{c.real:.17g}", f"{c.imag:.17g}", f"{abs(c):.17g}"]
                    )
        _write_sidecar_manifest(coeffs_path, cfg)
    _write_sidecar_manifest(cfg.out, cfg)
    print(f"scanned {len(profiles)} profile(s) on {n} angles -> {cfg.out}")
    return EXIT_OK


def cmd_fan6(cfg: RunConfig) -> int:
    masses = load_masses(cfg.measures[0])
    if len(masses) != 1:
        raise MeasureError("fan6 expects exactly one planar measure in the file")
    fan = regular_six_fan(masses[0], scan_points=int(cfg.extras.get("scan_points") or 720))
    payload = {
        "manifest": _manifest(cfg),
        "center": _pair(fan.center),
        "base_angle": fan.base_angle,
        "lines": [{"direction": ln.direction, "offset": ln.offset} for ln in fan.lines],
        "bisection_errors": list(fan.bisection_errors),
    }
    _write_json(cfg.out, payload)
    print(f"six-fan center {fan.center:.6g} -> {cfg.out}")
    return EXIT_OK


def cmd_adversarial(cfg: RunConfig) -> int:
    spec = AdversarialSpec(
        q=cfg.q,
        n=int(cfg.extras.get("n") or 1),
        r=float(cfg.extras.get("r") or 100.0),
        delta=float(cfg.extras.get("delta") or 1e-3),
    )
    mass = adversarial_mass(spec, cfg.seed)
    save_masses(mass, cfg.out)
    _write_sidecar_manifest(
        cfg.out, cfg, extra={"spec": asdict(spec), "total": mass.total}
    )
    print(f"adversarial mass with {2 * spec.n} disks -> {cfg.out}")
    return EXIT_OK


def _support_window(m: MassSpec) -> tuple[float, float]:
    lo, hi = np.inf, -np.inf
    for comp in m.components:
        if isinstance(comp, Gaussian):
            c, half = complex(comp.mean[0]), 4.0 * comp.sigma
        else:
            c, half = comp.center, comp.radius
        lo = min(lo, c.real - half, c.imag - half)
        hi = max(hi, c.real + half, c.imag + half)
    pad = 0.1 * max(hi - lo, 1.0)
    return lo - pad, hi + pad


def cmd_certify(cfg: RunConfig) -> int:
    masses = load_masses(cfg.measures[0])
    if len(masses) != 1:
        raise MeasureError("certify expects exactly one planar measure in the file")
    mass = masses[0]
    n = check_grid_size(cfg.grid)
    sweep = cfg.extras.get("sweep")
    if sweep:
        k = int(sweep)
        if k < 2:
            raise MeasureError("--sweep needs at least 2 grid points per axis")
        window = cfg.extras.get("window")
        if window:
            lo, hi = (float(v) for v in window.split(","))
        else:
            lo, hi = _support_window(mass)
        axis = np.linspace(lo, hi, k)
        worst = np.empty((k, k))
        with open(cfg.out, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["center_re", "center_im", "worst_deviation"])
            for i, yv in enumerate(axis):
                for j, xv in enumerate(axis):
                    worst[i, j] = worst_center_deviation(mass, cfg.q, complex(xv, yv), n)
                    writer.writerow([f"{xv:.17g}", f"{yv:.17g}", f"{worst[i, j]:.17g}"])
        summary = {
            "min_worst_deviation": float(worst.min()),
            "max_worst_deviation": float(worst.max()),
            "window": [lo, hi],
            "grid_points": k,
            "total": mass.total,
        }
        _write_sidecar_manifest(cfg.out, cfg, extra=summary)
        print(
            f"sweep over {k}x{k} centers: min worst deviation "
            f"{summary['min_worst_deviation']:.6g} -> {cfg.out}"
        )
        return EXIT_OK
    report = centerpoint_certificate(
        mass, cfg.q, grid_size=n, scan_points=int(cfg.extras.get("scan_points") or 720)
    )
    x = Configuration.from_apex(report.center)
    theta = 2.0 * np.pi * np.arange(n) / n
    f = sector_measure(mass, x, report.q, theta)
    with open(cfg.out, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["theta", "f", "deviation"])
        for t, v in zip(theta, f):
            writer.writerow([f"{t:.17g}", f"{v:.17g}", f"{abs(v - mass.total / report.q):.17g}"])
    summary = {
        "q": report.q,
        "center": _pair(report.center),
        "linf": report.linf,
        "bound": report.bound,
        "passed": report.passed,
        "worst_theta": report.worst_theta,
        "bisection_errors": list(report.fan.bisection_errors),
    }
    _write_sidecar_manifest(cfg.out, cfg, extra=summary)
    if not report.passed:
        print(
            f"certificate violated: linf {report.linf:.6g} > bound {report.bound:.6g}",
            file=sys.stderr,
        )
        return EXIT_VIOLATION
    print(f"certified: linf {report.linf:.6g} <= {report.bound:.6g} -> {cfg.out}")
    return EXIT_OK


def cmd_tailsum(cfg: RunConfig) -> int:
    value = tail_sum(cfg.q, int(cfg.extras.get("n") or 0))
    print(f"{value:.17g}")
    if cfg.out:
        _write_json(
            cfg.out,
            {"manifest": _manifest(cfg), "q": cfg.q, "n": int(cfg.extras.get("n") or 0), "value": value},
        )
    return EXIT_OK


# --- wiring ------------------------------------------------------------------


def _build_parser() -> _Parser:
    parser = _Parser(prog="qfan", description=__doc__.split("\n", 1)[0])
    parser.add_argument("--version", action="version", version=f"qfan {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    def common(sp, grid=True):
        if grid:
            sp.add_argument("--grid", type=int, default=256, help="angular grid size (power of two)")
        sp.add_argument("--seed", type=int, default=0, help="seed for every stochastic step")

    sp = sub.add_parser("solve", help="find a coefficient-annihilating hyperplane")
    sp.add_argument("--measures", required=True, help="JSON file with d measures on C^d")
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--exponents", type=_parse_exponents, default=None, help="e.g. 1,2")
    sp.add_argument("--starts", type=int, default=32)
    sp.add_argument("--tol", type=float, default=1e-6)
    sp.add_argument("--explore-all", action="store_true", dest="explore_all",
                    help="run every start and report all distinct witnesses")
    sp.add_argument("--out", required=True)
    common(sp)

    sp = sub.add_parser("verify", help="solve for exponents 1..n and check deviation bounds")
    sp.add_argument("--measures", required=True, help="JSON file with k measures of dimension k*n")
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--n", type=int, default=1, help="length of the zeroed coefficient prefix")
    sp.add_argument("--starts", type=int, default=32)
    sp.add_argument("--tol", type=float, default=1e-6)
    sp.add_argument("--out", required=True)
    common(sp)

    sp = sub.add_parser("scan", help="dump a sector profile and its coefficients")
    sp.add_argument("--measures", required=True)
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--apex", default=None, help="planar apex as 're,im'")
    sp.add_argument("--config", default=None, help="JSON file with configuration fields a, b")
    sp.add_argument("--coeffs", default=None, help="also write a coefficient CSV here")
    sp.add_argument("--out", required=True)
    common(sp)

    sp = sub.add_parser("fan6", help="three concurrent bisecting lines pi/3 apart")
    sp.add_argument("--measure", dest="measures", required=True)
    sp.add_argument("--scan-points", dest="scan_points", type=int, default=720)
    sp.add_argument("--out", required=True)
    common(sp, grid=False)

    sp = sub.add_parser("adversarial", help="generate the two-cluster disk family")
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--n", type=int, required=True, help="disks per cluster")
    sp.add_argument("--r", type=float, required=True, help="cluster separation scale (> 2)")
    sp.add_argument("--delta", type=float, required=True, help="disk radius (< 1/2n)")
    sp.add_argument("--out", required=True)
    common(sp, grid=False)

    sp = sub.add_parser("certify", help="uniform-deviation certificate at a fan center")
    sp.add_argument("--measure", dest="measures", required=True)
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--scan-points", dest="scan_points", type=int, default=720)
    sp.add_argument("--sweep", type=int, default=None,
                    help="instead: sweep a KxK center grid and tabulate worst deviations")
    sp.add_argument("--window", default=None, help="sweep window as 'lo,hi' (both axes)")
    sp.add_argument("--out", required=True)
    common(sp)

    sp = sub.add_parser("tailsum", help="closed-form tail of sum 1/m^2 off multiples of q")
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--n", type=int, default=0)
    sp.add_argument("--out", default=None)

    return parser


_DISPATCH = {
    "solve": cmd_solve,
    "verify": cmd_verify,
    "scan": cmd_scan,
    "fan6": cmd_fan6,
    "adversarial": cmd_adversarial,
    "certify": cmd_certify,
    "tailsum": cmd_tailsum,
}


def main(argv=None) -> int:
    parser = _build_parser()
    ns = parser.parse_args(argv)
    cfg = _run_config(ns)
    try:
        return _DISPATCH[cfg.subcommand](cfg)
    except (MeasureError, ValueError, OSError) as exc:
        print(f"qfan {cfg.subcommand}: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
