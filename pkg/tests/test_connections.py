import numpy as np
import pytest

from distgeo.catalog import manifold
from distgeo.connections import (
    AsymmetricCubicForm,
    ClosedFormGeometry,
    ConnectionSpec,
    DirectGeometry,
    ambient_connection,
    normalize_kind,
    verify_characterization,
)
from distgeo.distribution import Distribution

U3 = ("1", "0", "1")
K_SYM = {(0, 0, 2): "1/2", (0, 2, 0): "1/2", (2, 0, 0): "1/2"}


@pytest.mark.parametrize("alias,kind", [("ssm", "SSM"), ("levi-civita", "LC"), ("stat*", "STAT_DUAL")])
def test_kind_aliases(alias, kind):
    assert normalize_kind(alias) == kind


def test_unknown_kind():
    with pytest.raises(ValueError):
        ConnectionSpec("quarter")


def test_ssm_needs_u():
    with pytest.raises(ValueError):
        ConnectionSpec("SSM")


@pytest.mark.parametrize(
    "spec",
    [ConnectionSpec("LC"), ConnectionSpec("SSM", U3), ConnectionSpec("SSNM", U3), ConnectionSpec("STAT", None, K_SYM),
     ConnectionSpec("STAT_DUAL", None, K_SYM)],
    ids=lambda s: s.kind,
)
def test_characterization(spec):
    frame = manifold("sphere3").sample()
    for res in verify_characterization(Distribution(frame, (0, 1)), spec):
        assert res.passed, res.as_dict()


def test_asymmetric_cubic_form_rejected():
    frame = manifold("sphere3").sample()
    with pytest.raises(AsymmetricCubicForm):
        ambient_connection(frame, ConnectionSpec("STAT", None, {(0, 0, 2): "1"}))


def test_statistical_pair_averages_to_levi_civita():
    frame = manifold("heisenberg3").sample()
    spec = ConnectionSpec("STAT", None, K_SYM)
    avg = (ambient_connection(frame, spec) + ambient_connection(frame, spec.dual())) * 0.5
    assert (avg - frame.levi_civita).max_abs() < 1e-14


@pytest.mark.parametrize("kind", ["SSM", "SSNM", "STAT"])
def test_closed_form_matches_direct(kind):
    frame = manifold("warped-sphere", "exp(t)").sample()
    spec = ConnectionSpec(kind, ("1", "t", "0", "1")) if kind != "STAT" else ConnectionSpec(
        "STAT", None, {(0, 0, 0): "t"}
    )
    dist = Distribution(frame, (0, 1))
    direct, closed = DirectGeometry(dist, spec), ClosedFormGeometry(dist, spec)
    e = frame.basis()
    for i in (0, 1):
        for j in (0, 1):
            assert (direct.nabla_d(e[i], e[j]) - closed.nabla_d(e[i], e[j])).max_abs() < 1e-12
            assert (direct.b(e[i], e[j]) - closed.b(e[i], e[j])).max_abs() < 1e-12
        for xi in (2, 3):
            assert (direct.a(e[xi], e[i]) - closed.a(e[xi], e[i])).max_abs() < 1e-12


def test_ssnm_is_not_metric():
    frame = manifold("sphere3").sample()
    gamma = ambient_connection(frame, ConnectionSpec("SSNM", U3))
    assert frame.metricity_table(gamma).max_abs() > 0.5
    assert frame.torsion_table(gamma).max_abs() > 0.5
