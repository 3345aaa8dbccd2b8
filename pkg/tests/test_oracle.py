import math

import numpy as np
import pytest
from scipy import integrate

from kelvinwalk import boundary as bd
from kelvinwalk.errors import ConfigError, DomainError
from kelvinwalk.oracle import (
    AxisBandSpec,
    axis_band_value,
    cap_harmonic_measure,
    exact_point_source,
    interior_reference,
    poisson_quadrature,
)

SRC = (0.0, 5.0, 0.0)


@pytest.mark.parametrize(
    "xi, expected",
    [((0, 0, 0), 0.2), ((0, 0, 0.5), 1 / math.sqrt(25.25)), ((0, 0, -0.8), 1 / math.sqrt(25.64))],
)
def test_exact_point_source(xi, expected):
    assert exact_point_source(xi, SRC) == pytest.approx(expected, rel=1e-15)


def test_exact_point_source_domain():
    with pytest.raises(DomainError):
        exact_point_source((0, 0, 2), SRC)
    with pytest.raises(DomainError):
        exact_point_source((0, 0, 0), (0, 0, 0.5))


@pytest.mark.parametrize("xi", [(0, 0, 0), (0.3, -0.2, 0.5), (-0.6, 0.1, -0.1), (0, 0.7, 0)])
def test_point_source_is_harmonic(xi):
    h = 1e-3
    xi = np.array(xi, dtype=float)
    f = lambda p: exact_point_source(p, SRC)
    lap = sum(f(xi + h * e) + f(xi - h * e) - 2 * f(xi) for e in np.eye(3)) / h**2
    assert abs(lap) <= 1e-5


def _cap_by_scipy(r, c):
    # Poisson integral over eta_3 > c, axisymmetric so one polar integral remains
    def integrand(theta):
        dist = math.sqrt(1 + r * r - 2 * r * math.cos(theta))
        return (1 - r * r) / (4 * math.pi * dist**3) * 2 * math.pi * math.sin(theta)

    val, _ = integrate.quad(integrand, 0.0, math.acos(c), epsabs=1e-13, epsrel=1e-12, limit=200)
    return val


@pytest.mark.parametrize("r", [0.0, 0.2, 0.5, 0.8, 0.95])
@pytest.mark.parametrize("c", [-0.9, -0.3, 0.5, 0.85])
def test_cap_measure_matches_scipy(r, c):
    assert cap_harmonic_measure(r, c) == pytest.approx(_cap_by_scipy(r, c), abs=1e-6)


def test_cap_examples():
    assert cap_harmonic_measure(0.0, 0.5) == 0.25
    assert cap_harmonic_measure(0.8, 0.5) == pytest.approx(0.8795, abs=5e-5)
    assert cap_harmonic_measure(0.8, 0.0) == pytest.approx(0.9493, abs=5e-5)


def test_cap_complementarity_and_monotonicity():
    rng = np.random.default_rng(5)
    for _ in range(200):
        R = rng.uniform(0.5, 3)
        r, c = rng.uniform(0, 0.999) * R, rng.uniform(-0.999, 0.999) * R
        up = cap_harmonic_measure(r, c, R)
        lo = cap_harmonic_measure(r, c, R, upper=False)
        assert abs(up + lo - 1) <= 1e-12
        assert 0 <= up <= 1
    cs = np.linspace(-0.999999, 0.999999, 401)
    for r in (0.0, 0.4, 0.9):
        w = [cap_harmonic_measure(r, c) for c in cs]
        assert np.all(np.diff(w) < 0)
        assert cap_harmonic_measure(r, -1 + 1e-13) > 1 - 1e-9
        assert cap_harmonic_measure(r, 1 - 1e-13) < 1e-9


def test_cap_domain():
    for args in ((1.0, 0.0), (-0.1, 0.0), (0.5, 1.0), (0.5, -1.0)):
        with pytest.raises(DomainError):
            cap_harmonic_measure(*args)


def test_axis_band_examples():
    assert axis_band_value(0.0, AxisBandSpec([-0.5, 0.5], [1, 2, 1])) == pytest.approx(1.5, abs=1e-15)
    assert axis_band_value(0.0, AxisBandSpec([0.0], [0, 1])) == pytest.approx(0.5, abs=1e-15)
    assert axis_band_value(0.8, AxisBandSpec([-0.5, 0.5], [2, 1, 2])) == pytest.approx(1.8985, abs=5e-5)


def test_axis_band_reflection():
    spec = AxisBandSpec([-0.5, 0.5], [1, 2, 1])
    for r in (0.1, 0.5, 0.9):
        assert axis_band_value(-r, spec) == pytest.approx(axis_band_value(r, spec), abs=1e-14)
    skew = AxisBandSpec([-0.2, 0.6], [3, -1, 2])
    mirror = AxisBandSpec([-0.6, 0.2], [2, -1, 3])
    for r in (0.3, 0.7):
        assert axis_band_value(-r, skew) == pytest.approx(axis_band_value(r, mirror), abs=1e-14)


def test_axis_band_spec_validation():
    for cuts, values in (([0.5, -0.5], [1, 2, 1]), ([0.1], [1]), ([1.0], [1, 2])):
        with pytest.raises(ConfigError):
            AxisBandSpec(cuts, values)


def test_axis_band_matches_quadrature_random():
    rng = np.random.default_rng(11)
    for _ in range(20):
        k = rng.integers(1, 4)
        cuts = np.sort(rng.uniform(-0.9, 0.9, size=k))
        values = rng.uniform(-3, 3, size=k + 1)
        r = rng.uniform(-0.9, 0.9)
        bf = bd.latitude_bands(cuts, values)
        q = poisson_quadrature((0, 0, r), bf)
        assert abs(q.value - axis_band_value(r, AxisBandSpec(cuts, values))) <= max(q.accuracy, 1e-9)


def test_quadrature_constant():
    for xi in ((0, 0, 0), (0.3, 0.4, -0.5), (0.9, 0, 0), (0.1, -0.2, 0.97)):
        assert poisson_quadrature(xi, bd.constant(2.5)).value == pytest.approx(2.5, abs=1e-10)


def test_quadrature_example2_center():
    assert poisson_quadrature((0, 0, 0), bd.example2()).value == pytest.approx(1.0, abs=1e-4)


def test_quadrature_point_source_within_reported_accuracy():
    bf = bd.point_source(SRC)
    rng = np.random.default_rng(8)
    pts = [(0, 0, 0.5)] + [tuple(rng.uniform(-0.5, 0.5, 3)) for _ in range(9)]
    for xi in pts:
        q = poisson_quadrature(xi, bf)
        assert abs(q.value - exact_point_source(xi, SRC)) <= q.accuracy


def test_quadrature_example2_symmetries():
    bf = bd.example2()
    a = poisson_quadrature((0.5, 0.5, 0.5), bf).value
    b = poisson_quadrature((-0.5, -0.5, 0.5), bf).value
    assert a == pytest.approx(0.970629, abs=1e-5) and a == pytest.approx(b, abs=1e-9)
    # a half-turn about the polar axis maps each octant to one with equal data
    c = poisson_quadrature((0.5, -0.5, 0.5), bf).value
    d = poisson_quadrature((-0.5, 0.5, 0.5), bf).value
    assert c == pytest.approx(d, abs=1e-9) and c < a


def test_quadrature_refuses_outside_points():
    with pytest.raises(DomainError):
        poisson_quadrature((0, 0, 1), bd.example2())


def test_interior_reference_dispatch():
    assert interior_reference(bd.point_source(SRC), (0, 0, 0)).accuracy == 0.0
    axis = interior_reference(bd.example1(), (0, 0, 0.5))
    assert axis.accuracy < 1e-12
    off = interior_reference(bd.example1(values=(2, 1, 2)), (0, 0.5, 0.5))
    assert off.value == pytest.approx(1.6810052, abs=1e-6)
