"""Numerical laboratory for rotationally symmetric model manifolds.

The package tabulates warped-product geometry from a radial curvature
profile and drives a family of numerical probes on top of it: p-Green
functions, weighted Hardy and Hessian-vs-Laplacian comparisons, cutoff
certification, exhaustion solves for (-Lap + 1) v = psi, gradient-ratio
estimates, and a stochastic completeness classifier.  The `warplab`
console script batches these into deterministic CSV/JSON reports.
"""

from .curvature import Flat, IteratedLog, PowerLaw, Tabulated
from .errors import (
    ConfigurationError,
    ConstructionError,
    DomainError,
    IntegrationError,
    PreconditionError,
    RangeError,
    SolverError,
    WarplabError,
)
from .geometry import ModelManifold, build_model, model_from_dict, model_to_dict
from .green import GreenFunction, build_green, hardy_weight, superharmonicity_residual

__version__ = "0.1.0"

__all__ = [
    "ConfigurationError",
    "ConstructionError",
    "DomainError",
    "Flat",
    "GreenFunction",
    "IntegrationError",
    "IteratedLog",
    "ModelManifold",
    "PowerLaw",
    "PreconditionError",
    "RangeError",
    "SolverError",
    "Tabulated",
    "WarplabError",
    "build_green",
    "build_model",
    "hardy_weight",
    "model_from_dict",
    "model_to_dict",
    "superharmonicity_residual",
    "__version__",
]
