"""Gradient-constrained boundary extensions and anisotropic graph distances.

Thin wrapper over the C++ core (`gradex._core`). The main entry points:

- ``ConvexField`` / ``ConvexSet``: constraint sets and their gauge/support
  functions;
- ``Domain`` + ``discretize``: domain discretization graphs;
- ``quasi_dist``: directed Finsler quasi-distances between points;
- ``ExtensionProblem``: maximal/minimal extensions of boundary data;
- ``run_scenario``: the CLI pipelines driven from Python.
"""

from gradex._core import (  # noqa: F401
    AdmissibilityReport,
    ConfigError,
    ConvexField,
    ConvexSet,
    Domain,
    ExtensionProblem,
    GeometryError,
    MeshGraph,
    ModelError,
    ScalarExpr,
    ScalarField,
    UniquenessMask,
    __version__,
    discretize,
    hausdorff_distance,
    quasi_dist,
    run_scenario,
    uniqueness_set,
)

__all__ = [
    "AdmissibilityReport",
    "ConfigError",
    "ConvexField",
    "ConvexSet",
    "Domain",
    "ExtensionProblem",
    "GeometryError",
    "MeshGraph",
    "ModelError",
    "ScalarExpr",
    "ScalarField",
    "UniquenessMask",
    "discretize",
    "hausdorff_distance",
    "quasi_dist",
    "run_scenario",
    "uniqueness_set",
    "__version__",
]
