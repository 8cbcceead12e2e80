import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from hypres.polyroots import cluster_roots, polynomial_roots
from hypres.special import rgamma


def test_rgamma_matches_mpmath_on_strip():
    rng = np.random.default_rng(3)
    z = rng.uniform(-30, 30, 400) + 1j * rng.uniform(-40, 40, 400)
    got = rgamma(z)
    want = np.array([complex(mpmath.rgamma(complex(v))) for v in z])
    assert np.max(np.abs(got - want) / np.maximum(np.abs(want), 1e-300)) < 1e-12


def test_rgamma_exact_zeros_and_values():
    assert np.all(rgamma(np.array([0.0, -1.0, -2.0, -17.0])) == 0)
    assert rgamma(1.0) == pytest.approx(1.0, rel=1e-15)
    assert rgamma(0.5) == pytest.approx(1 / np.sqrt(np.pi), rel=1e-14)


@given(st.lists(st.tuples(st.floats(-5, 5), st.floats(-5, 5)), min_size=1, max_size=8))
def test_roots_recover_prescribed(roots):
    r = np.array([complex(a, b) for a, b in roots])
    if len(r) > 1:
        gaps = np.abs(r[:, None] - r[None, :]) + np.eye(len(r)) * 1e9
        if gaps.min() < 0.3:
            return
    coeffs = np.poly(r)[::-1]
    got = polynomial_roots(coeffs)
    for z in r:
        assert np.min(np.abs(got - z)) < 1e-8 * (1 + abs(z))


@given(st.lists(st.floats(-3, 3), min_size=2, max_size=9))
def test_real_coefficients_give_conjugate_closed_roots(c):
    c = np.array(c)
    if abs(c[-1]) < 1e-2:
        return
    z = polynomial_roots(c)
    assert np.allclose(np.sort_complex(z), np.sort_complex(np.conj(z)), atol=0)


def test_cluster_double_root():
    coeffs = np.poly([1 + 1j, 1 + 1j, -2.0])[::-1]
    groups = cluster_roots(polynomial_roots(coeffs))
    orders = sorted(o for _, o in groups)
    assert orders == [1, 2]
