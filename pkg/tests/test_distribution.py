import numpy as np
import pytest

from distgeo.catalog import manifold
from distgeo.distribution import Distribution, InvalidDistribution, NotNormal, NotTangent


@pytest.fixture
def sphere():
    return manifold("sphere3").sample()


def test_projection_splits_fields(sphere):
    d = Distribution(sphere, (0, 1))
    v = sphere.field(["1", "t", "t^2"])
    assert ((d.tangent(v) + d.normal(v)) - v).max_abs() == 0.0
    assert np.all(d.tangent(v).values[2] == 0)


def test_from_one_based(sphere):
    assert Distribution.from_one_based(sphere, [1, 3]).indices == (0, 2)


@pytest.mark.parametrize("idx", [(), (0, 1, 2), (3,), (-1,)])
def test_invalid_index_sets(sphere, idx):
    with pytest.raises(InvalidDistribution):
        Distribution(sphere, idx)


def test_tangent_guard(sphere):
    d = Distribution(sphere, (0, 1))
    e = sphere.basis()
    with pytest.raises(NotTangent):
        d.require_tangent(e[2])
    with pytest.raises(NotNormal):
        d.require_normal(e[0])


def test_sphere_planes_are_not_integrable(sphere):
    ok, witness = Distribution(sphere, (0, 1)).is_integrable()
    assert not ok
    assert witness[0] == (0, 1)


def test_warped_fiber_is_integrable_and_umbilical():
    frame = manifold("warped-sphere", "exp(t)").sample()
    fiber = Distribution(frame, (1, 2, 3))
    assert fiber.is_integrable() == (True, None)
    warped = Distribution(frame, (1, 2))
    mean = warped.mean_curvature().values
    assert np.allclose(mean[0], -1.0) and np.allclose(mean[1:], 0.0)  # -(f'/f) dt with f = e^t
    p = warped.predicates()
    assert p["umbilical"].holds and not p["totally_geodesic"].holds
    assert Distribution(frame, (0,)).predicates()["totally_geodesic"].holds


def test_heisenberg_plane_is_minimal():
    frame = manifold("heisenberg3").sample()
    p = Distribution(frame, (0, 1)).predicates()
    assert p["minimal"].holds
    assert p["totally_geodesic"].holds  # B is skew, its symmetric part vanishes


def test_second_fundamental_form_values(sphere):
    d = Distribution(sphere, (0, 1))
    e = sphere.basis()
    b = d.second_fundamental_form(e[0], e[1])
    assert np.allclose(b.values[:, 0], [0, 0, 1])
