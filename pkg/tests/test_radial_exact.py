import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from hypres.geometry import HyperbolicModel
from hypres.radial_exact import (ball_resonances_odd, build_outgoing_polynomial, coth_minus_one,
                                 ell_one_resonance, evaluate_outgoing, large_radius_limit)

H3 = HyperbolicModel(1.0, 3)
COTH1 = float(mpmath.coth(1))


def test_k1_constant():
    p = build_outgoing_polynomial(H3, 1, 0.7)
    assert p.degree == 0 and p.coeffs.tolist() == [1.0]
    assert p.roots_beta().size == 0


def test_k2_coefficients():
    p = build_outgoing_polynomial(H3, 2, 1.0)
    assert p.coeffs == pytest.approx([1.3130352855, -1.0], abs=1e-10)
    assert p.coeffs[0] == pytest.approx(COTH1, rel=1e-15)


def test_k3_against_symbolic_expansion():
    # (1-b)(2-b) + 3 x (2-b) + 3 x^2 with x = coth 1 - 1
    x = COTH1 - 1.0
    want = np.array([2 + 6 * x + 3 * x * x, -3 - 3 * x, 1.0])
    p = build_outgoing_polynomial(H3, 3, 1.0)
    assert p.coeffs == pytest.approx(want, rel=1e-14)
    assert p.coeffs[1] == pytest.approx(-3.939105857, abs=1e-9)
    assert p.coeffs[0] == pytest.approx(4.172184983, abs=1e-9)


def test_rejects_flat_and_bad_input():
    with pytest.raises(ValueError):
        build_outgoing_polynomial(HyperbolicModel(0.0, 3), 2, 1.0)
    with pytest.raises(ValueError):
        build_outgoing_polynomial(H3, 0, 1.0)


def test_coth_minus_one_large_argument():
    assert coth_minus_one(40.0) == pytest.approx(float(mpmath.coth(40) - 1), rel=1e-14)


def test_extended_precision_branch_agrees():
    # k = 30 uses extended precision; build the same sum directly in mpmath
    k, R = 30, 0.8
    with mpmath.workdps(50):
        x = mpmath.coth(R) - 1
        poly = [mpmath.mpf(0)] * k
        for j in range(k):
            a = mpmath.mpf(1)
            for l in range(1, j + 1):
                a *= (k * (k - 1) - l * (l - 1))
            a = a * x ** j / (2 ** j * mpmath.factorial(j))
            p = [mpmath.mpf(1)]
            for m in range(j + 1, k):
                new = [mpmath.mpf(0)] * (len(p) + 1)
                for i, c in enumerate(p):
                    new[i] += m * c
                    new[i + 1] -= c
                p = new
            for i, c in enumerate(p):
                poly[i] += a * c
        want = np.array([float(c) for c in poly])
    got = build_outgoing_polynomial(H3, k, R).coeffs
    assert got == pytest.approx(want, rel=1e-13)


def test_evaluate_outgoing_examples():
    assert evaluate_outgoing(H3, 1, 0.9, 1 - 2j) == pytest.approx(np.exp(1j * 0.9 * (1 - 2j)))
    assert evaluate_outgoing(H3, 2, 1.0, 0.0) == pytest.approx(1.3130352855, abs=1e-10)


def test_evaluate_outgoing_solves_radial_ode():
    # -u'' + k(k-1) kappa^2 / sinh^2(kappa r) u - sigma^2 u = 0
    k, sigma, h = 3, 1 - 2j, 1e-4
    r = np.arange(0.5, 2.0 + h / 2, h)
    u = np.array([evaluate_outgoing(H3, k, rr, sigma) for rr in r])
    upp = (u[2:] - 2 * u[1:-1] + u[:-2]) / h ** 2
    rr = r[1:-1]
    res = -upp + k * (k - 1) / np.sinh(rr) ** 2 * u[1:-1] - sigma ** 2 * u[1:-1]
    assert np.max(np.abs(res)) <= 1e-6 * np.max(np.abs(u))


def test_ball_resonances_examples():
    assert ball_resonances_odd(H3, 0, 1.0) == []
    (r,) = ball_resonances_odd(H3, 1, 1.0)
    assert r.lam == pytest.approx(-1.3130352855j, abs=1e-10) and r.multiplicity == 3
    pair = ball_resonances_odd(H3, 2, 1.0)
    assert len(pair) == 2 and all(p.multiplicity == 5 for p in pair)
    # quadratic formula in extended precision
    with mpmath.workdps(30):
        x = mpmath.coth(1) - 1
        b, c = -(3 + 3 * x), 2 + 6 * x + 3 * x * x
        beta = (-b + mpmath.sqrt(b * b - 4 * c)) / 2
        want = complex(-1j * beta)
    got = sorted((p.lam for p in pair), key=lambda z: z.real)
    assert got[1] == pytest.approx(want, abs=1e-12)
    assert got[0] == pytest.approx(-want.conjugate(), abs=1e-12)
    assert abs(want.real - 0.541337) < 1e-6 and abs(want.imag + 1.969553) < 1e-6


def test_ell_one_closed_form():
    for kappa, R in ((1.0, 0.25), (0.3, 2.0), (2.0, 1.5)):
        (r,) = ball_resonances_odd(HyperbolicModel(kappa, 3), 1, R)
        assert r.lam == pytest.approx(ell_one_resonance(kappa, R), rel=1e-13)


@given(st.sampled_from([3, 5, 7]), st.integers(0, 8), st.floats(0.1, 5.0), st.floats(0.2, 3.0))
def test_root_count_symmetry_and_width(n, ell, R, kappa):
    model = HyperbolicModel(kappa, n)
    res = ball_resonances_odd(model, ell, R)
    k = (n - 1) // 2 + ell
    from hypres.geometry import harmonic_dimension
    assert sum(r.multiplicity for r in res) == (k - 1) * harmonic_dimension(n, ell)
    lams = np.array([r.lam for r in res])
    for z in lams:
        assert np.min(np.abs(lams + np.conj(z))) <= 1e-10 * max(1.0, abs(z))
        assert z.imag <= -kappa / 2 + 1e-9
    if k == 2:
        assert lams[0].imag <= -kappa / math.tanh(kappa * R) + 1e-12


@pytest.mark.parametrize("k", [2, 3, 4, 5])
def test_large_radius_limit(k):
    model = HyperbolicModel(1.0, 2 * k + 1)
    roots = build_outgoing_polynomial(model, k, 12.0).sigma_roots()
    lim = large_radius_limit(model, k)
    assert roots.size == lim.size
    for z in roots:
        assert np.min(np.abs(lim - z)) < 5e-3
