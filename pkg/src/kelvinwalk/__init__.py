"""Monte Carlo Dirichlet solver for the ball and its exterior.

Exterior points are inverted into the ball, the interior problem is solved by
discretised Brownian walks, and the Kelvin transform maps the estimate back.
"""
__version__ = "0.1.0"

from ._accel import HAVE_NUMBA, USE_NUMBA, default_backend
from .boundary import (
    BoundaryFunction,
    constant,
    example1,
    example2,
    from_spec,
    latitude_bands,
    octants,
    point_source,
)
from .engine import (
    Estimate,
    WalkConfig,
    WalkSamples,
    run_trajectory,
    sample_walks,
    solve_exterior,
    solve_interior,
    to_exterior,
)
from .errors import ConfigError, DomainError, InvariantError, KelvinWalkError
from .geometry import INFINITY, Location, SphereDomain, classify, invert, reconstruct_exterior_value
from .oracle import (
    axis_band_value,
    cap_harmonic_measure,
    exact_point_source,
    interior_reference,
    poisson_quadrature,
)

__all__ = [
    "BoundaryFunction", "ConfigError", "DomainError", "Estimate", "HAVE_NUMBA", "INFINITY",
    "InvariantError", "KelvinWalkError", "Location", "SphereDomain", "USE_NUMBA", "WalkConfig",
    "WalkSamples", "axis_band_value", "cap_harmonic_measure", "classify", "constant",
    "default_backend", "exact_point_source", "example1", "example2", "from_spec",
    "interior_reference", "invert", "latitude_bands", "octants", "point_source",
    "poisson_quadrature", "reconstruct_exterior_value", "run_trajectory", "sample_walks",
    "solve_exterior", "solve_interior", "to_exterior",
]
