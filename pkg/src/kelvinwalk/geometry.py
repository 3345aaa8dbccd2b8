"""Points, the origin-centred sphere, inversion and the Kelvin rescaling."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import DomainError

#: relative half-width of the "on the sphere" band, in units of R**2
SURFACE_RTOL = 1e-12


def as_point(p) -> np.ndarray:
    """Coerce a coordinate triple to a finite float64 array of shape (3,)."""
    arr = np.asarray(p, dtype=np.float64)
    if arr.shape != (3,):
        raise DomainError(f"expected a coordinate triple, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DomainError("point coordinates must be finite")
    return arr


def norm(p) -> float:
    x, y, z = (float(c) for c in p)
    return math.sqrt(x * x + y * y + z * z)


class Location(enum.Enum):
    INSIDE = "inside"
    ON_SURFACE = "on_surface"
    OUTSIDE = "outside"


class _Infinity:
    """The point at infinity of an exterior problem."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITY"

    def __reduce__(self):
        return (_Infinity, ())


INFINITY = _Infinity()

ExteriorPoint = Union[np.ndarray, _Infinity]


def is_infinity(x) -> bool:
    return x is INFINITY


@dataclass(frozen=True)
class SphereDomain:
    """Sphere of radius ``radius`` centred at the origin."""

    radius: float = 1.0

    def __post_init__(self):
        r = float(self.radius)
        if not (math.isfinite(r) and r > 0.0):
            raise DomainError(f"sphere radius must be positive and finite, got {self.radius!r}")
        object.__setattr__(self, "radius", r)

    @property
    def surface_tol(self) -> float:
        return SURFACE_RTOL * self.radius**2

    def classify(self, p) -> Location:
        return classify(p, self)

    def exterior_point(self, x) -> ExteriorPoint:
        """Validate ``x`` as an exterior evaluation point (or pass INFINITY)."""
        if is_infinity(x):
            return INFINITY
        x = as_point(x)
        if classify(x, self) is not Location.OUTSIDE:
            raise DomainError(f"point not exterior: |x|={norm(x)!r} <= R={self.radius!r}")
        return x


def classify(p, dom: SphereDomain) -> Location:
    x, y, z = (float(c) for c in p)
    d = x * x + y * y + z * z
    r2 = dom.radius * dom.radius
    if abs(d - r2) <= SURFACE_RTOL * r2:
        return Location.ON_SURFACE
    return Location.INSIDE if d < r2 else Location.OUTSIDE


def invert(x, radius: float) -> np.ndarray:
    """Image of ``x`` under inversion in the sphere of radius ``radius``.

    The image lies on the ray through ``x`` and satisfies
    ``|x| * |invert(x)| == radius**2``.
    """
    x = as_point(x)
    d = float(x @ x)
    if d == 0.0:
        raise DomainError("inversion undefined at origin")
    return (radius * radius / d) * x


def reconstruct_exterior_value(v: float, x: ExteriorPoint, radius: float) -> float:
    """Exterior solution at ``x`` from the interior value ``v`` at its image.

    Returns 0 at infinity (decay condition); no interior value is needed there.
    """
    if is_infinity(x):
        return 0.0
    return v * radius / norm(x)
