"""Regular q-sector measures on the complex plane and their center structures.

The package computes circle-group Fourier coefficients of sector-measure
profiles f(theta) = mu(S(x, q, theta)), solves for configurations whose
prescribed coefficients vanish, and verifies the resulting deviation bounds
on concrete Gaussian/disk mixtures. See the README for the CLI and the
acceptance suite.
"""

from ._version import __version__
from .estimators import FanCenter, SixFanCenter, mass_from_points
from .fan import (
    AdversarialSpec,
    CertificateReport,
    FanLine,
    FanScanError,
    SixFan,
    adversarial_mass,
    bisecting_line,
    centerpoint_certificate,
    halfplane_measure,
    regular_six_fan,
    worst_center_deviation,
)
from .fourier import (
    KAPPA,
    AccuracyError,
    DeviationReport,
    FourierProfile,
    acceleration,
    coefficient,
    deviation_report,
    equivariance_residual,
    l2_bound_constant,
    l2_deviation,
    linf_deviation,
    profile,
    tail_sum,
    total_variation,
)
from .measures import (
    Configuration,
    DegenerateConfigurationError,
    Disk,
    Gaussian,
    MassSpec,
    MeasureError,
    MonteCarloEstimate,
    PlanarMassSpec,
    load_masses,
    mass_from_dict,
    mass_to_dict,
    monte_carlo_sector_measure,
    pushforward_planar,
    sample,
    save_masses,
    sector_contains,
    sector_measure,
    total_mass,
    wedge_measure,
)
from .solver import (
    HyperplaneDesc,
    SolveProblem,
    SolveResult,
    hyperplane_of,
    residual,
    residual_components,
    solve,
)

__all__ = [
    "__version__",
    "KAPPA",
    "AccuracyError",
    "AdversarialSpec",
    "CertificateReport",
    "Configuration",
    "DegenerateConfigurationError",
    "DeviationReport",
    "Disk",
    "FanCenter",
    "FanLine",
    "FanScanError",
    "FourierProfile",
    "Gaussian",
    "HyperplaneDesc",
    "MassSpec",
    "MeasureError",
    "MonteCarloEstimate",
    "PlanarMassSpec",
    "SixFan",
    "SixFanCenter",
    "SolveProblem",
    "SolveResult",
    "acceleration",
    "adversarial_mass",
    "bisecting_line",
    "centerpoint_certificate",
    "coefficient",
    "deviation_report",
    "equivariance_residual",
    "halfplane_measure",
    "hyperplane_of",
    "l2_bound_constant",
    "l2_deviation",
    "linf_deviation",
    "load_masses",
    "mass_from_dict",
    "mass_from_points",
    "mass_to_dict",
    "monte_carlo_sector_measure",
    "profile",
    "pushforward_planar",
    "regular_six_fan",
    "residual",
    "residual_components",
    "sample",
    "save_masses",
    "sector_contains",
    "sector_measure",
    "solve",
    "tail_sum",
    "total_mass",
    "total_variation",
    "wedge_measure",
    "worst_center_deviation",
]
