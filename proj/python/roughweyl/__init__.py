"""Weighted P1 eigenproblems on rough Riemannian surfaces.

Thin wrapper over the compiled core. Field, weight and boundary arguments use
the same text forms as the experiment files, for example ``"cone:alpha=pi/2"``
or ``"halves:1,-1"``.
"""

from ._core import (
    ConfigError,
    Error,
    Mesh,
    MeshError,
    ModelingError,
    SolverError,
    __version__,
    disk,
    fit_limit,
    laplace_eigenvalues,
    mesh_from_text,
    refine,
    run,
    solve_weighted,
    unit_square,
    weyl_target,
)

__all__ = [
    "ConfigError",
    "Error",
    "Mesh",
    "MeshError",
    "ModelingError",
    "SolverError",
    "__version__",
    "disk",
    "fit_limit",
    "laplace_eigenvalues",
    "mesh_from_text",
    "refine",
    "run",
    "solve_weighted",
    "unit_square",
    "weyl_target",
]
