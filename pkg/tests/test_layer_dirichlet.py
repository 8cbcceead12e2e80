import numpy as np
import pytest

from hypres.geometry import HyperbolicModel, distance_from_polar
from hypres.layer import BoundarySurface, ShapeFunction, free_kernel, solve_exterior_dirichlet
from hypres.layer.dirichlet import DirichletSolveError, as_polar, boundary_trace
from hypres.layer.harmonics import real_sph_harm

H3 = HyperbolicModel(1.0, 3)
SOURCE = np.array([0.04, -0.03, 0.05])


def _point_source(lam):
    rs, os_ = as_polar(SOURCE)

    def f(points):
        r, o = as_polar(points)
        return free_kernel(H3, lam, distance_from_polar(H3, r, o, rs[0], os_[0]))

    return f


def _exterior_points(rng, count=10):
    o = rng.standard_normal((count, 3))
    o /= np.linalg.norm(o, axis=1, keepdims=True)
    return rng.uniform(0.45, 1.5, count)[:, None] * o


@pytest.fixture(scope="module")
def surfaces():
    return {
        "sphere": BoundarySurface.sphere(H3, 0.25, 600),
        "perturbed": BoundarySurface.build(ShapeFunction(0.25, ((2, 0, 0.0125), (3, 1, 0.01))), H3, 600),
    }


@pytest.mark.parametrize("kind", ["sphere", "perturbed"])
@pytest.mark.parametrize("method", ["single", "combined"])
@pytest.mark.parametrize("lam", [2 - 0.5j, 1.3])
def test_reproduces_interior_point_source(surfaces, rng, kind, method, lam):
    f = _point_source(lam)
    u = solve_exterior_dirichlet(surfaces[kind], H3, lam, f, method=method)
    x = _exterior_points(rng)
    want = f(x)
    assert np.max(np.abs(u(x) - want)) <= 1e-4 * np.max(np.abs(want))


def test_zero_data(surfaces, rng):
    u = solve_exterior_dirichlet(surfaces["sphere"], H3, 2 - 0.5j, np.zeros(600))
    assert np.all(u.density == 0) and np.all(u(_exterior_points(rng)) == 0)


def test_off_node_trace(surfaces, rng):
    S = surfaces["sphere"]
    coef = rng.standard_normal(16)
    idx = [(l, m) for l in range(4) for m in range(-l, l + 1)]
    data = lambda o: sum(c * real_sph_harm(l, m, o) for c, (l, m) in zip(coef, idx))
    u = solve_exterior_dirichlet(S, H3, 2 - 0.5j, data(S.nodes))
    o = rng.standard_normal((40, 3))
    o /= np.linalg.norm(o, axis=1, keepdims=True)
    assert np.max(np.abs(boundary_trace(u, o) - data(o))) <= 1e-3 * np.max(np.abs(data(o)))


def test_fails_at_resonance(surfaces):
    S = BoundarySurface.sphere(H3, 0.25, 350)
    with pytest.raises(DirichletSolveError) as info:
        solve_exterior_dirichlet(S, H3, -1j / np.tanh(0.25), np.ones(350))
    assert info.value.condition >= 1e12


def test_combined_condition_on_real_axis(surfaces):
    u = solve_exterior_dirichlet(surfaces["sphere"], H3, 1.3, np.ones(600), method="combined")
    assert np.isfinite(u.condition) and u.condition < 1e6


def test_input_checks(surfaces):
    S = surfaces["sphere"]
    with pytest.raises(ValueError):
        solve_exterior_dirichlet(S, H3, 0.0, np.ones(600))
    with pytest.raises(ValueError):
        solve_exterior_dirichlet(S, H3, 1.0, np.ones(5))
    with pytest.raises(ValueError):
        solve_exterior_dirichlet(S, H3, 1.0, np.ones(600), method="double")
    u = solve_exterior_dirichlet(S, H3, 1.0 - 1j, np.ones(600))
    with pytest.raises(ValueError):
        u(np.array([[0.1, 0.0, 0.0]]))
    with pytest.raises(ValueError):
        u((S.radius[7] + 0.2 * S.mesh_width()) * S.nodes[7][None, :])
