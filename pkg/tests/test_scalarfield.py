import math

import numpy as np
import pytest
import sympy as sp

from distgeo.jets import JetArray, jeinsum
from distgeo.scalarfield import (
    DEFAULT_PLAN,
    DomainError,
    ExprSyntaxError,
    UnknownIdentifier,
    derivative,
    eval_values,
    evaluate,
    parse_expr,
    render,
)

EXPRS = ["2*t+1", "exp(t)", "(2*t+1)^(2/3)", "sin(t)*cos(2*t)", "sqrt(1+t^2)/t", "t^(-2) - 3*t^3"]


@pytest.mark.parametrize("text", EXPRS)
def test_render_round_trip(text):
    e = parse_expr(text)
    again = parse_expr(render(e))
    pts = DEFAULT_PLAN.points
    assert np.allclose(eval_values(e, pts), eval_values(again, pts), rtol=1e-14, atol=0)


@pytest.mark.parametrize("text", EXPRS)
def test_jet_derivatives_match_sympy(text):
    t = sp.symbols("t")
    sym = sp.sympify(text.replace("^", "**"))
    pts = DEFAULT_PLAN.points
    jet = evaluate(parse_expr(text), pts, 3).derivatives()
    for k in range(4):
        f = sp.lambdify(t, sp.diff(sym, t, k), "numpy")
        expect = np.asarray(f(np.asarray(pts)), dtype=float) * np.ones(len(pts))
        assert np.allclose(jet[..., k], expect, rtol=1e-12, atol=1e-12)


def test_symbolic_derivative_agrees_with_jets():
    e = parse_expr("exp(2*t)*sin(t)")
    d2 = eval_values(derivative(e, 2), DEFAULT_PLAN.points)
    jet = evaluate(e, DEFAULT_PLAN.points, 3).derivatives()[..., 2]
    assert np.allclose(d2, jet, rtol=1e-13)


def test_syntax_error_reports_byte_offset():
    with pytest.raises(ExprSyntaxError) as info:
        parse_expr("2**t")
    assert info.value.offset == 1
    assert "byte 1" in str(info.value)


def test_unknown_identifier():
    with pytest.raises(UnknownIdentifier):
        parse_expr("log(t)")


def test_parameters_substitute():
    e = parse_expr("a*t+b", {"a": 2, "b": 1})
    assert np.allclose(eval_values(e, [0.5]), [2.0])


def test_domain_error_names_point():
    with pytest.raises(DomainError):
        evaluate(parse_expr("sqrt(t-1)"), DEFAULT_PLAN.points, 3)


def test_jet_product_rule():
    pts = np.array(DEFAULT_PLAN.points)
    x = JetArray.variable(pts, 3)
    f = (x * x).sin() * x.exp()
    d = f.derivatives()
    expect = 2 * pts * np.cos(pts**2) * np.exp(pts) + np.sin(pts**2) * np.exp(pts)
    assert np.allclose(d[..., 1], expect, rtol=1e-13)


def test_jeinsum_matches_numpy_on_values():
    rng = np.random.default_rng(0)
    a = JetArray(rng.normal(size=(3, 4, 5, 4)))
    b = JetArray(rng.normal(size=(4, 5, 4)))
    out = jeinsum("ij,j->i", a, b)
    assert np.allclose(out.values, np.einsum("ijp,jp->ip", a.values, b.values))


def test_power_fraction_exact():
    vals = eval_values(parse_expr("(2*t+1)^(2/3)"), [0.5])
    assert math.isclose(vals[0], 2 ** (2 / 3), rel_tol=1e-15)
