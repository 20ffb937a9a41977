import numpy as np
import pytest

from distgeo.catalog import ZeroWarp, manifold
from distgeo.frame import FrameManifold, InvalidFrame, SingularMetric
from distgeo.scalarfield import parse_expr


def test_sphere_levi_civita_is_metric_and_torsion_free():
    frame = manifold("sphere3").sample()
    conn = frame.connection()
    assert conn.torsion_residual() < 1e-13
    assert conn.metricity_residual() < 1e-13


def test_unit_sphere_has_unit_sectional_curvature():
    frame = manifold("sphere3").sample()
    k = frame.sectional_table(frame.levi_civita).values
    off = ~np.eye(3, dtype=bool)
    assert np.allclose(k[off], 1.0, atol=1e-13)


def test_ricci_sign_convention():
    # Ric(X, Y) = sum_k g(R(X, E_k)Y, E_k): the unit sphere has s = -6
    s3 = manifold("sphere3").sample()
    assert np.allclose(s3.scalar_curvature(s3.levi_civita).values, -6.0, atol=1e-13)
    h = manifold("heisenberg3").sample()
    assert np.allclose(h.scalar_curvature(h.levi_civita).values, 0.5, atol=1e-13)


@pytest.mark.parametrize("f", ["2*t+1", "exp(t)"])
def test_warped_frame_invariants(f):
    res = manifold("warped-sphere", f).sample().validate()
    assert res["jacobi"] < 1e-12 and res["derivation"] < 1e-12


def test_jacobi_violation_is_rejected():
    man = FrameManifold.from_brackets(
        ("A", "B", "C"), ["1", "1", "1"], {(0, 1): {2: parse_expr("1")}, (1, 2): {0: parse_expr("1")}, (2, 0): {0: parse_expr("1")}}
    )
    with pytest.raises(InvalidFrame):
        man.sample().validate()


def test_singular_metric_is_rejected():
    man = FrameManifold.from_brackets(("A", "B"), ["1", "t-1"], {})
    with pytest.raises(SingularMetric):
        man.sample()


def test_vanishing_warp_is_rejected():
    with pytest.raises(ZeroWarp):
        manifold("warped-sphere", "t-0.6")


def test_bracket_is_antisymmetric_and_matches_table():
    frame = manifold("heisenberg3").sample()
    e = frame.basis()
    b12 = frame.bracket(e[0], e[1])
    b21 = frame.bracket(e[1], e[0])
    assert (b12 + b21).max_abs() == 0.0
    assert np.allclose(b12.values[2], 1.0)
