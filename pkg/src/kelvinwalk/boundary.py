"""Piecewise boundary data on the sphere.

A :class:`BoundaryFunction` is a list of regions, each a strict-inequality
classifier paired with a value function. Points on a discontinuity curve
are accepted by no region and take the value 0.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import ConfigError, DomainError

# |eta|**2 may deviate from R**2 by this much (relative) before evaluate refuses
_ON_SPHERE_RTOL = 1e-9

# octant sign patterns, in the order S1..S8
OCTANT_SIGNS = (
    (+1, +1, +1),
    (-1, +1, +1),
    (-1, -1, +1),
    (+1, -1, +1),
    (+1, +1, -1),
    (-1, +1, -1),
    (-1, -1, -1),
    (+1, -1, -1),
)

EXAMPLE1_VALUES = (1.0, 2.0, 1.0)
EXAMPLE1_TABLE_VALUES = (2.0, 1.0, 2.0)
EXAMPLE2_VALUES = (1.0, 0.0, 1.0, 0.0, 2.0, 1.0, 2.0, 1.0)

Predicate = Callable[[np.ndarray], np.ndarray]
ValueFn = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class Region:
    accepts: Predicate
    value: ValueFn
    label: str = ""


@dataclass(frozen=True)
class BoundaryFunction:
    regions: tuple
    on_curve: Predicate
    descriptor: str
    radius: float = 1.0
    curve_value: float = 0.0
    # quadrature hints: heights and azimuths where the data jump
    z_breaks: tuple = ()
    phi_breaks: tuple = ()
    # (lo, hi) bounds of the data, when known in closed form
    value_range: Optional[tuple] = None
    spec: dict = field(default_factory=dict)

    def evaluate_many(self, eta) -> np.ndarray:
        """Boundary values at an (n, 3) array of sphere points."""
        eta = np.atleast_2d(np.asarray(eta, dtype=np.float64))
        r2 = self.radius * self.radius
        d = np.einsum("ij,ij->i", eta, eta)
        if np.any(np.abs(d - r2) > _ON_SPHERE_RTOL * r2):
            raise DomainError("boundary data evaluated away from the sphere")
        out = np.full(len(eta), float(self.curve_value))
        hits = np.zeros(len(eta), dtype=np.int64)
        for reg in self.regions:
            m = np.asarray(reg.accepts(eta), dtype=bool)
            if m.any():
                out[m] = reg.value(eta[m])
            hits += m
        if np.any(hits > 1):
            raise ConfigError("regions overlap")
        orphan = (hits == 0) & ~np.asarray(self.on_curve(eta), dtype=bool)
        if np.any(orphan):
            raise ConfigError("regions do not cover sphere")
        return out

    def __call__(self, eta) -> float:
        return evaluate(self, eta)


def evaluate(bf: BoundaryFunction, eta) -> float:
    return float(bf.evaluate_many(np.asarray(eta, dtype=np.float64).reshape(1, 3))[0])


def _const(c):
    c = float(c)
    return lambda eta: np.full(len(eta), c)


def _no_curve(eta):
    return np.zeros(len(eta), dtype=bool)


def latitude_bands(cuts: Sequence[float], values: Sequence[float], radius: float = 1.0) -> BoundaryFunction:
    """Piecewise-constant data on bands ``cuts[i-1] < eta_3 < cuts[i]``.

    The lowest band is closed at the south pole and the highest at the north
    pole; ``eta_3 == cut`` is a discontinuity curve.
    """
    cuts = [float(c) for c in cuts]
    values = [float(v) for v in values]
    if len(values) != len(cuts) + 1:
        raise ConfigError(f"need len(values) == len(cuts) + 1, got {len(values)} and {len(cuts)}")
    if any(not math.isfinite(v) for v in values):
        raise ConfigError("band values must be finite")
    if any(b <= a for a, b in zip(cuts, cuts[1:])):
        raise ConfigError("cuts must be strictly ascending")
    if any(not (-radius < c < radius) for c in cuts):
        raise ConfigError("cuts must lie strictly inside (-R, R)")

    eps = 1e-9 * radius
    edges = [-radius - eps] + cuts + [radius + eps]
    regions = []
    for i, v in enumerate(values):
        lo, hi = edges[i], edges[i + 1]
        regions.append(
            Region(
                accepts=lambda eta, lo=lo, hi=hi: (eta[:, 2] > lo) & (eta[:, 2] < hi),
                value=_const(v),
                label=f"{lo:g}<z<{hi:g}",
            )
        )
    cut_arr = np.asarray(cuts)

    def on_curve(eta):
        return np.isin(eta[:, 2], cut_arr)

    return BoundaryFunction(
        regions=tuple(regions),
        on_curve=on_curve,
        descriptor=f"latitude_bands(cuts={cuts}, values={values})",
        radius=float(radius),
        z_breaks=tuple(cuts),
        value_range=(min(values), max(values)),
        spec={"kind": "latitude_bands", "cuts": cuts, "values": values},
    )


def constant(c: float, radius: float = 1.0) -> BoundaryFunction:
    return latitude_bands([], [c], radius=radius)


def octants(values: Sequence[float], radius: float = 1.0) -> BoundaryFunction:
    """Constant data on the eight open octants, ordered as ``OCTANT_SIGNS``.

    Any point with a zero coordinate lies on a curve and gets 0.
    """
    values = [float(v) for v in values]
    if len(values) != 8:
        raise ConfigError(f"octant data needs exactly 8 values, got {len(values)}")
    if any(not math.isfinite(v) for v in values):
        raise ConfigError("octant values must be finite")
    regions = []
    for signs, v in zip(OCTANT_SIGNS, values):
        s = np.asarray(signs, dtype=np.float64)
        regions.append(
            Region(
                accepts=lambda eta, s=s: np.all(eta * s > 0.0, axis=1),
                value=_const(v),
                label="".join("+" if c > 0 else "-" for c in signs),
            )
        )
    return BoundaryFunction(
        regions=tuple(regions),
        on_curve=lambda eta: np.any(eta == 0.0, axis=1),
        descriptor=f"octants(values={values})",
        radius=float(radius),
        z_breaks=(0.0,),
        phi_breaks=(0.0, 0.5 * math.pi, math.pi, 1.5 * math.pi),
        value_range=(min(values), max(values)),
        spec={"kind": "octants", "values": values},
    )


def point_source(source, radius: float = 1.0) -> BoundaryFunction:
    """Smooth data ``1/|eta - source|`` for a source outside the closed ball."""
    src = np.asarray(source, dtype=np.float64)
    if src.shape != (3,) or not np.all(np.isfinite(src)):
        raise ConfigError("source_point must be a finite coordinate triple")
    dist = float(np.linalg.norm(src))
    if dist <= radius:
        raise ConfigError(f"point source must lie outside the closed ball (|source|={dist} <= R={radius})")

    def value(eta):
        return 1.0 / np.linalg.norm(eta - src, axis=1)

    return BoundaryFunction(
        regions=(Region(accepts=lambda eta: np.ones(len(eta), dtype=bool), value=value, label="S"),),
        on_curve=_no_curve,
        descriptor=f"point_source(source={src.tolist()})",
        radius=float(radius),
        value_range=(1.0 / (dist + radius), 1.0 / (dist - radius)),
        spec={"kind": "point_source", "source_point": src.tolist()},
    )


def example1(radius: float = 1.0, values: Sequence[float] = EXAMPLE1_VALUES) -> BoundaryFunction:
    """Three latitude bands split at heights -R/2 and R/2."""
    return latitude_bands([-0.5 * radius, 0.5 * radius], values, radius=radius)


def example2(radius: float = 1.0, values: Sequence[float] = EXAMPLE2_VALUES) -> BoundaryFunction:
    return octants(values, radius=radius)


def from_spec(spec: dict, radius: float = 1.0) -> BoundaryFunction:
    """Build boundary data from a declarative mapping (see the README)."""
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ConfigError("boundary: expected a mapping with a 'kind' key")
    kind = spec["kind"]
    try:
        if kind == "latitude_bands":
            return latitude_bands(spec.get("cuts", []), spec["values"], radius=radius)
        if kind == "octants":
            return octants(spec["values"], radius=radius)
        if kind == "point_source":
            return point_source(spec["source_point"], radius=radius)
        if kind == "constant":
            return constant(spec["value"], radius=radius)
    except KeyError as exc:
        raise ConfigError(f"boundary: missing field {exc.args[0]!r} for kind {kind!r}") from None
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"boundary: {exc}") from None
    raise ConfigError(f"boundary: unknown kind {kind!r}")
