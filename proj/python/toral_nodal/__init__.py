"""Nodal sets of flat-torus eigenfunctions: lattice shells, restriction
experiments and classical checks, backed by the C++ library."""

import json

from ._core import (
    Eigenfunction,
    NumericalError,
    ValidationError,
    abc_bound,
    affine_rank,
    common_roots,
    enumerate_shell,
    epsilon_d,
    legendre,
    legendre_roots,
    recursion_constants,
    run_cli,
    zonal_parallels,
)
from ._core import clusters_json as _clusters_json


def clusters(d, r2, rho, delta2="1/4"):
    """Cluster decomposition of the shell as a dict."""
    return json.loads(_clusters_json(d, r2, rho, delta2))


__all__ = [
    "Eigenfunction",
    "NumericalError",
    "ValidationError",
    "abc_bound",
    "affine_rank",
    "clusters",
    "common_roots",
    "enumerate_shell",
    "epsilon_d",
    "legendre",
    "legendre_roots",
    "recursion_constants",
    "run_cli",
    "zonal_parallels",
]
