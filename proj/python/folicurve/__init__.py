"""Mean curvature tools for sphere-foliated hypersurfaces in H^n x R.

Thin re-export of the compiled ``_folicurve`` module. Structured results
(verification reports, scans) come back as plain dicts; profile rows come
back as an (N, 8) numpy array with columns t, r, r1, r2, k, k1, k2, K_check.
"""

from ._folicurve import (
    FoliationJet,
    FolicurveError,
    RotationalProfile,
    differentiate,
    euclidean_to_hyperbolic,
    evaluate,
    generate,
    hyperbolic_to_euclidean,
    leaf_points,
    mean_curvature_at,
    run_cli,
    scan,
    theorem_residuals,
    verify_identity,
)

__all__ = [
    "FoliationJet",
    "FolicurveError",
    "RotationalProfile",
    "differentiate",
    "euclidean_to_hyperbolic",
    "evaluate",
    "generate",
    "hyperbolic_to_euclidean",
    "leaf_points",
    "mean_curvature_at",
    "run_cli",
    "scan",
    "theorem_residuals",
    "verify_identity",
]
