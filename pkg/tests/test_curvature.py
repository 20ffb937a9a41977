import numpy as np
import pytest
import sympy as sp

import sym_oracle as so
from distgeo.catalog import manifold
from distgeo.connections import ConnectionSpec
from distgeo.curvature import (
    curvature_d_table,
    is_mixed_ricci_flat,
    ricci_D,
    rotation_residual,
    sectional,
    tensoriality_residual,
    verify_codazzi,
    verify_curvature_paths,
    verify_gauss,
    verify_ricci_eq,
)
from distgeo.distribution import Distribution
from distgeo.scalarfield import DEFAULT_PLAN

SPECS = {
    "LC": ConnectionSpec("LC"),
    "SSM": ConnectionSpec("SSM", ("1", "t", "0", "1")),
    "SSNM": ConnectionSpec("SSNM", ("0", "1", "t^2", "1")),
    "STAT": ConnectionSpec("STAT", None, {(0, 0, 0): "t", (1, 1, 1): "1", (0, 3, 3): "1", (3, 0, 3): "1", (3, 3, 0): "1"}),
}


@pytest.fixture(scope="module")
def warped():
    return manifold("warped-heisenberg", "exp(t)").sample()


@pytest.mark.parametrize("kind", list(SPECS))
@pytest.mark.parametrize("idx", [(0, 1), (1, 2, 3), (0,)])
def test_structure_equations(warped, kind, idx):
    dist = Distribution(warped, idx)
    for verify in (verify_gauss, verify_codazzi, verify_ricci_eq, verify_curvature_paths):
        rep = verify(dist, SPECS[kind])
        assert rep.max_residual < 1e-9, rep.as_dict()


@pytest.mark.parametrize("kind", list(SPECS))
def test_tensoriality(warped, kind):
    assert tensoriality_residual(Distribution(warped, (0, 1, 2)), SPECS[kind]) < 1e-10


@pytest.mark.parametrize("kind", list(SPECS))
def test_sectional_is_rotation_invariant(warped, kind):
    dist = Distribution(warped, (0, 1, 2))
    assert rotation_residual(dist, SPECS[kind], 1, 2) < 1e-12


def test_sectional_symmetric_in_pair(warped):
    dist = Distribution(warped, (0, 1, 2))
    spec = SPECS["SSNM"]
    assert (sectional(dist, spec, 0, 1) - sectional(dist, spec, 1, 0)).max_abs() < 1e-14


def test_zero_u_reduces_to_levi_civita(warped):
    dist = Distribution(warped, (0, 1))
    ref = curvature_d_table(dist, SPECS["LC"])
    for kind in ("SSM", "SSNM", "STAT"):
        zero = SPECS[kind].with_zero_parameter()
        assert (curvature_d_table(dist, zero) - ref).max_abs() < 1e-12


def test_mixed_ricci_flat_constant_warp():
    frame = manifold("warped-sphere", "2").sample()
    flat, worst, _ = is_mixed_ricci_flat(Distribution(frame, (0, 1, 2)), ConnectionSpec("SSM", ("1", "0", "0", "0")))
    assert flat and worst < 1e-12


# -- independent symbolic oracle -------------------------------------------------------------


def _numeric(exprs):
    pts = np.asarray(DEFAULT_PLAN.points)
    return np.array([np.broadcast_to(sp.lambdify(so.t, e, "numpy")(pts), pts.shape) for e in exprs], dtype=float)


@pytest.mark.parametrize("kind", ["SSM", "SSNM"])
@pytest.mark.parametrize("shape", ["sphere", "heisenberg"])
def test_induced_curvature_matches_symbolic_oracle(kind, shape):
    f = sp.exp(so.t)
    sym = so.warped(f, shape)
    u = sym.basis(0)
    nabla = so.ssm(sym, u) if kind == "SSM" else so.ssnm(sym, u)
    idx = (0, 1, 2)
    sd = so.SymDistribution(sym, idx, nabla)
    frame = manifold(f"warped-{shape}", "exp(t)").sample()
    dist = Distribution(frame, idx)
    spec = ConnectionSpec(kind, ("1", "0", "0", "0"))
    table = curvature_d_table(dist, spec).values
    for a in idx:
        for b in idx:
            for c in idx:
                expect = _numeric(sd.curvature(sym.basis(a), sym.basis(b), sym.basis(c)))
                assert np.allclose(table[a, b, c], expect, atol=1e-10), (a, b, c)
    ric, _ = ricci_D(dist, spec)
    for a in idx:
        for b in idx:
            expect = _numeric([so.ricci_d(sd, a, b)])[0]
            assert np.allclose(ric.values[a, b], expect, atol=1e-10), (a, b)


def test_levi_civita_matches_symbolic_koszul():
    sym = so.warped(sp.exp(so.t), "sphere")
    gam = sym.koszul()
    frame = manifold("warped-sphere", "exp(t)").sample()
    eng = frame.levi_civita.values
    for i in range(4):
        for j in range(4):
            assert np.allclose(eng[i, j], _numeric(gam[i][j]), atol=1e-12)
