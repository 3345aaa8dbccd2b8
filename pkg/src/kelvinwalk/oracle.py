"""Deterministic reference values for checking the Monte Carlo engine.

* ``exact_point_source`` - closed-form harmonic function ``1/|xi - source|``.
* ``cap_harmonic_measure`` / ``axis_band_value`` - Poisson integral of
  latitude-band data at points on the polar axis, in closed form.
* ``poisson_quadrature`` - tensor Gauss-Legendre quadrature of the Poisson
  integral for arbitrary boundary data and interior points.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np
from numpy.polynomial.legendre import leggauss

from .boundary import BoundaryFunction
from .errors import ConfigError, DomainError
from .geometry import as_point, norm


def exact_point_source(xi, source, radius: float = 1.0) -> float:
    xi = as_point(xi)
    source = as_point(source)
    if norm(xi) > radius * (1.0 + 1e-12):
        raise DomainError("evaluation point must lie in the closed ball")
    if norm(source) <= radius:
        raise DomainError("source must lie outside the closed ball")
    d = norm(xi - source)
    if d == 0.0:
        raise DomainError("evaluation point coincides with the source")
    return 1.0 / d


def cap_harmonic_measure(r: float, c: float, radius: float = 1.0, upper: bool = True) -> float:
    """Harmonic measure of the cap ``eta_3 > c`` seen from ``(0, 0, r)``.

    With ``upper=False`` the complementary cap ``eta_3 < c`` is measured
    instead (computed directly, not as ``1 - omega``).
    """
    R = float(radius)
    if not 0.0 <= r < R:
        raise DomainError(f"need 0 <= r < R, got r={r!r}")
    if not -R < c < R:
        raise DomainError(f"need -R < c < R, got c={c!r}")
    if r == 0.0:
        return (R - c) / (2.0 * R) if upper else (R + c) / (2.0 * R)
    # distance from (0,0,r) to the cut circle
    s = math.sqrt(R * R + r * r - 2.0 * r * c)
    if upper:
        return (R + r) * (R - c) / (s * (s + R - r))
    return (R - r) * (R + c) / (s * (s + R + r))


@dataclass(frozen=True)
class AxisBandSpec:
    cuts: tuple
    values: tuple
    radius: float = 1.0

    def __post_init__(self):
        cuts = tuple(float(c) for c in self.cuts)
        values = tuple(float(v) for v in self.values)
        if len(values) != len(cuts) + 1:
            raise ConfigError("need len(values) == len(cuts) + 1")
        if any(b <= a for a, b in zip(cuts, cuts[1:])):
            raise ConfigError("cuts must be strictly ascending")
        if any(not -self.radius < c < self.radius for c in cuts):
            raise ConfigError("cuts must lie strictly inside (-R, R)")
        object.__setattr__(self, "cuts", cuts)
        object.__setattr__(self, "values", values)


def axis_band_value(r: float, spec: AxisBandSpec) -> float:
    """Exact solution at ``(0, 0, r)`` for piecewise-constant band data."""
    R = spec.radius
    if not -R < r < R:
        raise DomainError(f"need |r| < R, got r={r!r}")

    def above(c):
        # measure of {eta_3 > c}; reflect through the equator for r < 0
        if c <= -R:
            return 1.0
        if c >= R:
            return 0.0
        if r >= 0.0:
            return cap_harmonic_measure(r, c, R)
        return cap_harmonic_measure(-r, -c, R, upper=False)

    edges = (-R,) + spec.cuts + (R,)
    total = 0.0
    for v, lo, hi in zip(spec.values, edges[:-1], edges[1:]):
        total += v * (above(lo) - above(hi))
    return total


class Quadrature(NamedTuple):
    value: float
    accuracy: float


def _panels(breaks: Sequence[float], lo: float, hi: float):
    pts = sorted({lo, hi, *(b for b in breaks if lo < b < hi)})
    return list(zip(pts[:-1], pts[1:]))


def _graded(centre: float, width: float, lo: float, hi: float):
    """Breaks at ``centre +- width * 2**k`` inside (lo, hi)."""
    out = []
    step = width
    while step < hi - lo:
        out += [centre - step, centre + step]
        step *= 2.0
    return [b for b in out if lo < b < hi]


def _gauss(panels, xg, wg):
    nodes = [0.5 * (b - a) * xg + 0.5 * (a + b) for a, b in panels]
    weights = [0.5 * (b - a) * wg for a, b in panels]
    return np.concatenate(nodes), np.concatenate(weights)


def _poisson_rule(xi, bf: BoundaryFunction, n: int) -> float:
    R = bf.radius
    xg, wg = leggauss(n)
    r = norm(xi)
    # the kernel peaks at xi/|xi| with angular width ~ (R - r)/R
    width = (R - r) / R
    theta_breaks = [math.acos(np.clip(z / R, -1.0, 1.0)) for z in bf.z_breaks]
    phi_breaks = list(bf.phi_breaks)
    if r > 0.0:
        th0 = math.acos(min(1.0, max(-1.0, xi[2] / r)))
        theta_breaks += _graded(th0, width, 0.0, math.pi)
        s0 = math.sin(th0)
        if s0 > width:
            ph0 = math.atan2(xi[1], xi[0]) % (2.0 * math.pi)
            # unwrap so the graded breaks stay on one side of the seam
            for b in _graded(ph0, width / s0, ph0 - math.pi, ph0 + math.pi):
                phi_breaks.append(b % (2.0 * math.pi))
    theta, wth = _gauss(_panels(theta_breaks, 0.0, math.pi), xg, wg)
    if phi_breaks:
        phi, wphi = _gauss(_panels(phi_breaks + [0.0], 0.0, 2.0 * math.pi), xg, wg)
    else:
        m = 2 * n
        phi = (np.arange(m) + 0.5) * (2.0 * math.pi / m)
        wphi = np.full(m, 2.0 * math.pi / m)

    st = np.sin(theta)
    T, P = np.meshgrid(theta, phi, indexing="ij")
    S = np.sin(T)
    eta = R * np.stack([S * np.cos(P), S * np.sin(P), np.cos(T)], axis=-1).reshape(-1, 3)
    g = bf.evaluate_many(eta)
    diff = eta - xi
    dist = np.sqrt(np.einsum("ij,ij->i", diff, diff))
    kernel = (R * R - float(xi @ xi)) / (4.0 * math.pi * R * dist**3)
    # dS = R^2 sin(theta) dtheta dphi
    w = (R * R) * np.outer(wth * st, wphi).ravel()
    return float(np.sum(w * kernel * g))


def poisson_quadrature(xi, bf: BoundaryFunction, nodes: int = 48) -> Quadrature:
    """Poisson integral of ``bf`` at the interior point ``xi``.

    Gauss-Legendre in polar angle and azimuth, with panel edges at the
    data's jump lines (so no panel straddles a discontinuity) and panels
    graded geometrically toward the kernel's peak. The accuracy is
    the change under doubling ``nodes`` per dimension (4x the grid), floored
    at a few ulps of the result.
    """
    xi = as_point(xi)
    if norm(xi) >= bf.radius:
        raise DomainError("quadrature point must lie strictly inside the sphere")
    coarse = _poisson_rule(xi, bf, nodes)
    fine = _poisson_rule(xi, bf, 2 * nodes)
    acc = abs(fine - coarse) + 1e-13 * max(1.0, abs(fine))
    return Quadrature(fine, acc)


def interior_reference(bf: BoundaryFunction, xi) -> Quadrature:
    """Best available reference value of the interior solution at ``xi``."""
    xi = as_point(xi)
    kind = bf.spec.get("kind")
    if kind == "point_source":
        return Quadrature(exact_point_source(xi, bf.spec["source_point"], bf.radius), 0.0)
    if kind == "latitude_bands" and xi[0] == 0.0 and xi[1] == 0.0:
        spec = AxisBandSpec(bf.spec["cuts"], bf.spec["values"], bf.radius)
        return Quadrature(axis_band_value(float(xi[2]), spec), 1e-14)
    return poisson_quadrature(xi, bf)
