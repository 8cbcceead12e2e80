import itertools
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from hypres.geometry import (HyperbolicModel, PolarPoint, angle_between, distance_from_polar,
                             geodesic_distance, harmonic_dimension, surface_measure_density, warp)

E1, E2, E3 = np.eye(3)


def unit(v):
    v = np.asarray(v, dtype=float)
    return v / np.linalg.norm(v)


directions = st.lists(st.floats(-1, 1), min_size=3, max_size=3).filter(
    lambda v: np.linalg.norm(v) > 1e-3).map(unit)


def test_model_validation():
    with pytest.raises(ValueError):
        HyperbolicModel(-1.0)
    with pytest.raises(ValueError):
        HyperbolicModel(float("inf"))
    with pytest.raises(ValueError):
        HyperbolicModel(1.0, 1)
    assert HyperbolicModel(0.0).euclidean


def test_polar_point_validation():
    with pytest.raises(ValueError):
        PolarPoint(-1.0, E1)
    with pytest.raises(ValueError):
        PolarPoint(1.0, [1.0, 1.0, 0.0])


def test_warp_values():
    assert warp(HyperbolicModel(0.0), 2.5) == 2.5
    assert warp(HyperbolicModel(1.0), 1.0) == pytest.approx(1.1752011936438014, rel=1e-15)
    with mpmath.workdps(40):
        ref = float(mpmath.sinh(mpmath.mpf("1e-8")) / mpmath.mpf("1e-8"))
    assert abs(warp(HyperbolicModel(1e-8), 1.0) - ref) <= 1e-15
    assert abs(warp(HyperbolicModel(1e-8), 1.0) - 1.0) <= 1e-15


def test_warp_series_branch_matches_mpmath():
    for k in (1e-3, 3e-5, 1e-7):
        for r in (0.5, 1.0, 3.0):
            with mpmath.workdps(40):
                ref = float(mpmath.sinh(k * mpmath.mpf(r)) / k)
            assert warp(HyperbolicModel(k), r) == pytest.approx(ref, rel=2e-16)


@given(st.floats(0.0, 5.0), st.floats(1e-6, 10.0), st.floats(1e-6, 10.0))
def test_warp_positive_increasing(kappa, r1, r2):
    m = HyperbolicModel(kappa)
    assert warp(m, r1) > 0
    if r1 < r2:
        assert warp(m, r1) <= warp(m, r2)


def test_distance_examples():
    m = HyperbolicModel(1.0)
    p = PolarPoint(1.0, E1)
    assert geodesic_distance(m, p, p) == 0.0
    assert geodesic_distance(m, p, PolarPoint(1.0, -E1)) == pytest.approx(2.0, abs=1e-14)
    assert geodesic_distance(m, p, PolarPoint(1.0, E2)) == pytest.approx(
        math.acosh(1.0 + math.sinh(1.0) ** 2), rel=1e-14)


def _geodesic_length_by_shooting(kappa, r1, r2, gamma):
    # geodesics of dr^2 + s(r)^2 dphi^2 in the plane spanned by the two directions
    s = lambda r: math.sinh(kappa * r) / kappa
    ds = lambda r: math.cosh(kappa * r)

    def rhs(t, y):
        r, phi, pr, pphi = y
        return [pr, pphi, s(r) * ds(r) * pphi ** 2, -2.0 * ds(r) / s(r) * pr * pphi]

    def shoot(a):
        # unit initial speed at (r1, 0) with angle a against the radial direction
        y0 = [r1, 0.0, math.cos(a), math.sin(a) / s(r1)]
        hit = lambda t, y: y[1] - gamma
        hit.terminal = True
        sol = solve_ivp(rhs, (0, 20), y0, events=hit, rtol=1e-12, atol=1e-12)
        if sol.t_events[0].size == 0:
            return 100.0, math.inf
        return sol.y_events[0][0][0] - r2, sol.t_events[0][0]

    a = brentq(lambda a: shoot(a)[0], 0.05, math.pi - 0.05, xtol=1e-13)
    return shoot(a)[1]


def test_distance_against_geodesic_integration():
    m = HyperbolicModel(1.0)
    got = geodesic_distance(m, PolarPoint(1.0, E1), PolarPoint(1.0, E2))
    assert got == pytest.approx(_geodesic_length_by_shooting(1.0, 1.0, 1.0, math.pi / 2), rel=1e-8)
    assert got == pytest.approx(math.acosh(math.cosh(1.0) ** 2), rel=1e-14)


@given(st.floats(0.0, 3.0), st.lists(st.tuples(st.floats(0.0, 3.0), directions), min_size=3, max_size=3))
def test_triangle_inequality(kappa, pts):
    m = HyperbolicModel(kappa)
    P = [PolarPoint(r, o) for r, o in pts]
    for a, b, c in itertools.permutations(P, 3):
        assert geodesic_distance(m, a, c) <= geodesic_distance(m, a, b) + geodesic_distance(m, b, c) + 1e-10


@given(st.floats(0.0, 3.0), st.floats(0.0, 4.0), directions, directions)
def test_distance_symmetric_and_to_origin(kappa, r, o1, o2):
    m = HyperbolicModel(kappa)
    assert geodesic_distance(m, PolarPoint(r, o1), PolarPoint(0.0, o2)) == pytest.approx(r, abs=1e-12)
    p, q = PolarPoint(r, o1), PolarPoint(0.7, o2)
    assert geodesic_distance(m, p, q) == geodesic_distance(m, q, p)
    assert geodesic_distance(m, p, q) >= 0


def test_distance_full_precision_nearby():
    m = HyperbolicModel(1.0)
    o1 = unit([1.0, 0.0, 0.0])
    o2 = unit([1.0, 1e-9, 0.0])
    d = distance_from_polar(m, 1.0, o1, 1.0, o2)
    assert d == pytest.approx(math.sinh(1.0) * 1e-9, rel=1e-8)


def test_angle_between_clamped():
    v = unit([1.0, 1e-17, 0.0])
    assert angle_between(v, v) == 0.0
    assert angle_between(E1, -E1) == pytest.approx(math.pi)


def _harmonic_dimension_brute(n, ell):
    # dim of homogeneous polynomials of degree l minus degree l-2 in n variables
    count = lambda d: math.comb(d + n - 1, n - 1) if d >= 0 else 0
    return count(ell) - count(ell - 2)


def test_harmonic_dimension():
    assert harmonic_dimension(3, 12) == 25
    assert harmonic_dimension(2, 0) == 1
    assert harmonic_dimension(2, 7) == 2
    assert harmonic_dimension(5, 2) == 14
    for n in range(2, 8):
        for ell in range(10):
            assert harmonic_dimension(n, ell) == _harmonic_dimension_brute(n, ell)
    assert sum(harmonic_dimension(3, l) for l in range(4)) == 16
    with pytest.raises(ValueError):
        harmonic_dimension(1, 0)
    with pytest.raises(ValueError):
        harmonic_dimension(3, -1)


def test_surface_measure_density_examples():
    assert surface_measure_density(HyperbolicModel(1.0), 0.7, 0.0) == pytest.approx(math.sinh(0.7) ** 2)
    assert surface_measure_density(HyperbolicModel(0.0), 0.7, 0.0) == pytest.approx(0.49)
    # f = 1 + 0.1 cos(theta) at theta = pi/2: |grad f|^2 = 0.01
    want = math.sinh(1.0) ** 2 * math.sqrt(1.0 + 0.01 / math.sinh(1.0) ** 2)
    assert surface_measure_density(HyperbolicModel(1.0), 1.0, 0.01) == pytest.approx(want, rel=1e-14)


def test_surface_measure_density_area_patch():
    # area of r = f(theta) over a small band, from the embedded metric, against the density
    m = HyperbolicModel(1.0)
    f = lambda t: 1.0 + 0.1 * np.cos(t)
    df = lambda t: -0.1 * np.sin(t)
    t = np.linspace(math.pi / 2 - 1e-3, math.pi / 2 + 1e-3, 2001)
    s = np.sinh(f(t))
    # dsigma = s sin(t) sqrt(s^2 + f'^2) dt dphi
    direct = np.trapezoid(s * np.sin(t) * np.sqrt(s ** 2 + df(t) ** 2), t)
    dens = surface_measure_density(m, f(t), df(t) ** 2)
    assert np.trapezoid(dens * np.sin(t), t) == pytest.approx(direct, rel=1e-12)


def test_kappa_continuity():
    m0, m1 = HyperbolicModel(0.0), HyperbolicModel(1e-7)
    o1, o2 = unit([1, 2, 3]), unit([-1, 0.5, 2])
    assert abs(warp(m0, 1.3) - warp(m1, 1.3)) <= 1e-12
    assert abs(distance_from_polar(m0, 0.8, o1, 1.3, o2) - distance_from_polar(m1, 0.8, o1, 1.3, o2)) <= 1e-12
    assert abs(surface_measure_density(m0, 0.8, 0.3) - surface_measure_density(m1, 0.8, 0.3)) <= 1e-12
