"""Positive radial solutions of -(a + b|grad u|^2) Lap u = lambda u^{q-1} + mu u^{p-1} on a ball.

Heavy lifting happens in the compiled ``_core`` module; results come back as
plain dicts (the same structure the command-line reports use) with numpy
arrays for profiles.
"""

from ._core import (
    ConvergenceNotReached,
    InvalidArgument,
    KirchhoffError,
    NoSolutionFound,
    NotConverged,
    ProblemParams,
    UnsupportedRegime,
    __version__,
    bessel_first_zero,
    classify,
    critical_exponent,
    f_eval,
    find_roots,
    first_eigenvalue,
    ground_level_m0,
    minimize_nehari,
    run,
    sobolev_constant,
    solve_local,
    spectral_constants,
    verify_limits,
)
from .schemas import schema_path, validate_report

__all__ = [
    "ConvergenceNotReached",
    "InvalidArgument",
    "KirchhoffError",
    "NoSolutionFound",
    "NotConverged",
    "ProblemParams",
    "UnsupportedRegime",
    "__version__",
    "bessel_first_zero",
    "classify",
    "critical_exponent",
    "f_eval",
    "find_roots",
    "first_eigenvalue",
    "ground_level_m0",
    "minimize_nehari",
    "run",
    "schema_path",
    "sobolev_constant",
    "solve_local",
    "spectral_constants",
    "validate_report",
    "verify_limits",
]
