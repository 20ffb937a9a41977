import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from distgeo import chen
from distgeo.catalog import manifold
from distgeo.connections import ConnectionSpec, verify_characterization
from distgeo.curvature import verify_codazzi, verify_gauss, verify_ricci_eq
from distgeo.distribution import Distribution
from distgeo.report import chen_draw, random_k
from distgeo.scalarfield import DEFAULT_PLAN, eval_values, evaluate, parse_expr, render

coef = st.floats(min_value=-2, max_value=2, allow_nan=False).map(lambda x: round(x, 3))
poly = st.tuples(coef, coef, coef).map(lambda c: f"{c[0]}+{c[1]}*t+{c[2]}*t^2")
FRAMES = {name: manifold(name).sample() for name in ("sphere3", "heisenberg3")}


@st.composite
def expressions(draw, depth=3):
    if depth == 0:
        return draw(st.sampled_from(["t", "1", "2", "(1/3)"]))
    a, b = draw(expressions(depth - 1)), draw(expressions(depth - 1))
    op = draw(st.sampled_from(["+", "-", "*", "exp", "sin", "pow"]))
    if op in ("exp", "sin"):
        return f"{op}(({a})/4)"
    if op == "pow":
        return f"(1+({a})^2)^(1/2)"
    return f"({a}){op}({b})"


@settings(max_examples=60, deadline=None)
@given(expressions())
def test_render_parse_round_trip(text):
    e = parse_expr(text)
    pts = DEFAULT_PLAN.points[:5]
    assert np.allclose(eval_values(parse_expr(render(e)), pts), eval_values(e, pts), rtol=1e-12, atol=1e-12)


@settings(max_examples=40, deadline=None)
@given(expressions(), expressions())
def test_jet_product_rule(a, b):
    pts = DEFAULT_PLAN.points
    ja, jb = evaluate(parse_expr(a), pts), evaluate(parse_expr(b), pts)
    prod = evaluate(parse_expr(f"({a})*({b})"), pts).derivatives()
    da, db = ja.derivatives(), jb.derivatives()
    expect = da[..., 1] * db[..., 0] + da[..., 0] * db[..., 1]
    assert np.allclose(prod[..., 1], expect, rtol=1e-10, atol=1e-10)


@settings(max_examples=25, deadline=None)
@given(
    st.sampled_from(sorted(FRAMES)),
    st.sampled_from(["SSM", "SSNM"]),
    st.tuples(poly, poly, poly),
    st.sampled_from([(0,), (1,), (0, 1), (0, 2), (1, 2)]),
)
def test_structure_equations_random_u(name, kind, u, idx):
    dist = Distribution(FRAMES[name], idx)
    spec = ConnectionSpec(kind, u)
    for verify in (verify_gauss, verify_codazzi, verify_ricci_eq):
        assert verify(dist, spec).max_residual < 1e-9
    assert all(r.passed for r in verify_characterization(dist, spec))


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([(0, 1), (2,)]))
def test_structure_equations_random_k(seed, idx):
    man = manifold("heisenberg3")
    dist = Distribution(FRAMES["heisenberg3"], idx)
    for kind in ("STAT", "STAT_DUAL"):
        spec = ConnectionSpec(kind, None, random_k(man, np.random.default_rng(seed)))
        for verify in (verify_gauss, verify_codazzi, verify_ricci_eq):
            assert verify(dist, spec).max_residual < 1e-9


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from(["SSM", "SSNM"]))
def test_chen_inequalities_random(seed, kind):
    dist, u, plane, x = chen_draw(np.random.default_rng(seed))
    spec = ConnectionSpec(kind, u)
    first = chen.chen_first(dist, spec, plane, 0.0)
    ricci = chen.chen_ricci(dist, spec, x, 0.0)
    for res in (first, ricci):
        assert res.slack.min() >= -1e-9
        assert res.two_path_residual < 1e-9


@settings(max_examples=50, deadline=None)
@given(st.integers(2, 6), st.integers(1, 3), st.integers(0, 2**32 - 1))
def test_algebraic_lemmas(n, p, seed):
    h = np.random.default_rng(seed).normal(size=(p, n, n, 8))
    lem = chen.algebraic_lemmas(h)
    assert np.all(lem["lhs54"] <= lem["rhs54"] + 1e-12)
    if n >= 3:
        assert np.all(lem["lhs48"] <= lem["rhs48"] + 1e-12)
