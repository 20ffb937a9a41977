"""Einstein and constant-scalar-curvature checks plus closed-form warp families.

Each family instance builds a warp function ``f(t)`` for one of the warped
presets, checks the ODEs its construction is based on, and round-trips it
through the curvature engine.  Families whose ``f`` vanishes (or whose base
of a fractional power turns negative) inside the default window are sampled
on a shifted window instead.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import cos, exp, sin, sqrt

import numpy as np

from .catalog import manifold
from .connections import ConnectionSpec
from .curvature import ricci_D, ricci_orthonormal
from .distribution import Distribution
from .scalarfield import DEFAULT_PLAN, Expr, SamplePlan, evaluate, parse_expr, render

ODE_TOL = 1e-8
MIN_WARP = 0.05
U_DT = ("1", "0", "0", "0")
WARP_D = (0, 1, 2)


class ConstraintViolated(ValueError):
    """Family parameters do not satisfy the relation the case requires."""


# -- checks ------------------------------------------------------------------------------


@dataclass
class CheckOutcome:
    holds: bool
    residual: float
    constant: float
    worst: tuple | None = None

    def as_dict(self):
        return {"pass": self.holds, "residual": self.residual, "constant": self.constant}


def is_einstein(dist: Distribution, spec: ConnectionSpec, c0=None, tol=None) -> CheckOutcome:
    """``Ric^D(E~_i, E~_j) = c0 delta_ij`` over the orthonormal D frame.

    With ``c0=None`` the constant is estimated from the first D direction
    at the first sample point and then verified everywhere.
    """
    tol = dist.frame.plan.abs_tol if tol is None else tol
    ric = ricci_orthonormal(dist, spec).values
    idx = list(dist.indices)
    sub = ric[np.ix_(idx, idx)]
    if c0 is None:
        c0 = float(sub[0, 0, 0])
    dev = np.abs(sub - c0 * np.eye(len(idx))[:, :, None])
    flat = int(np.argmax(dev))
    i, j, p = np.unravel_index(flat, dev.shape)
    res = float(dev.max())
    return CheckOutcome(res < tol, res, float(c0), (idx[i], idx[j], int(p)))


def has_constant_scalar(dist: Distribution, spec: ConnectionSpec, lam0=None, tol=None) -> CheckOutcome:
    """``s^D = lam0`` at every sample point (estimated from the first point if omitted)."""
    tol = dist.frame.plan.abs_tol if tol is None else tol
    s = ricci_D(dist, spec)[1].values
    if lam0 is None:
        lam0 = float(s[0])
    dev = np.abs(s - lam0)
    res = float(dev.max())
    return CheckOutcome(res < tol, res, float(lam0), (int(np.argmax(dev)),))


# -- families ------------------------------------------------------------------------------


def _num(x: float) -> str:
    return np.format_float_positional(float(x), unique=True, trim="-")


@dataclass(frozen=True)
class FamilyCase:
    label: str
    anchor: str
    note: str
    preset: str
    kind: str
    check: str  # "einstein" or "scalar"
    constant: str  # parameter that carries c0 or lambda0
    draws: tuple


@dataclass
class SolutionFamily:
    label: str
    case: FamilyCase
    params: dict
    constant: float
    f: Expr
    base: Expr | None  # w with f = w^(2/3), when the family is built that way
    variant: str = "printed"
    plan: SamplePlan = DEFAULT_PLAN
    shift: float = 0.0
    constraint: str = ""

    @property
    def f_text(self) -> str:
        return render(self.f)

    def spec(self) -> ConnectionSpec:
        if self.case.kind == "LC":
            return ConnectionSpec("LC")
        return ConnectionSpec(self.case.kind, U_DT)

    def distribution(self, f: Expr | None = None) -> Distribution:
        frame = manifold(self.case.preset, f=self.f if f is None else f, plan=self.plan).sample(self.plan)
        return Distribution(frame, WARP_D)

    def ode_residuals(self) -> dict:
        pts = self.plan.points
        fj = evaluate(self.f, pts, 3).derivatives()
        f, f1, f2 = fj[..., 0], fj[..., 1], fj[..., 2]
        out = {}
        k = self.constant
        name = self.label
        if name.startswith("thm5.1"):
            out["f'' - c0 f / 2"] = f2 - k / 2 * f
            out["f f'' + f'^2 - 4 - c0 f^2"] = f * f2 + f1**2 - 4 - k * f**2
        elif name.startswith("thm5.3"):
            out["f'' - c0 f / 2"] = f2 - k / 2 * f
            out["f f'' + f'^2 - c0 f^2"] = f * f2 + f1**2 - k * f**2
        else:
            w = evaluate(self.f, pts, 3).power(1.5).derivatives()
            p, q = self.w_coefficients()
            out["w'' + p w' - q w"] = w[..., 2] + p * w[..., 1] - q * w[..., 0]
            if self.variant == "printed":
                if name.startswith("thm5.5"):
                    s = 4 * f2 / f + 4 * f1 / f + 2 * f1**2 / f**2
                else:
                    s = 4 * f2 / f + 2 * f1**2 / f**2
                out["s - lambda0"] = s - k
        return {key: float(np.max(np.abs(v))) for key, v in out.items()}

    def w_coefficients(self):
        """``(p, q)`` of the linear equation ``w'' + p w' - q w = 0`` for w = f^(3/2)."""
        lam = self.constant
        if self.variant == "printed":
            return (1.0 if self.label.startswith("thm5.5") else 0.0), 3 * lam / 8
        if self.label.startswith("thm5.5"):
            return 2.0, 3 * (lam - 2) / 8
        if self.label.startswith("thm5.6"):
            return 1.0, 3 * (lam + 2) / 8
        return 0.0, 3 * lam / 8

    def round_trip(self, f: Expr | None = None) -> CheckOutcome:
        dist = self.distribution(f)
        if self.case.check == "einstein":
            return is_einstein(dist, self.spec(), self.constant)
        return has_constant_scalar(dist, self.spec(), self.constant)

    def perturbed(self, delta=0.1) -> CheckOutcome:
        """Round trip with ``f + delta`` in place of ``f``."""
        return self.round_trip(parse_expr(f"({self.f_text})+{_num(delta)}"))

    def describe(self) -> dict:
        return {
            "label": self.label,
            "variant": self.variant,
            "params": {k: float(v) for k, v in sorted(self.params.items())},
            "constant": self.constant,
            "f": self.f_text,
            "preset": self.case.preset,
            "connection": self.case.kind,
            "check": self.case.check,
            "window_shift": self.shift,
        }


def _e(k):
    return f"exp({_num(k)}*t)"


def _lin_combo(c1, e1, c2, e2):
    return f"({_num(c1)}*{e1}+{_num(c2)}*{e2})"


def _second_order(p, q, c1, c2):
    """Closed-form solution of ``w'' + p w' - q w = 0`` as (text, callable)."""
    disc = p * p / 4 + q
    a = -p / 2
    if abs(disc) < 1e-14:
        text = f"({_num(c1)}+{_num(c2)}*t)*{_e(a)}"
        return text, lambda t: (c1 + c2 * t) * exp(a * t)
    if disc > 0:
        r1, r2 = a + sqrt(disc), a - sqrt(disc)
        return _lin_combo(c1, _e(r1), c2, _e(r2)), lambda t: c1 * exp(r1 * t) + c2 * exp(r2 * t)
    b = sqrt(-disc)
    if a == 0:
        text = f"({_num(c1)}*cos({_num(b)}*t)+{_num(c2)}*sin({_num(b)}*t))"
        return text, lambda t: c1 * cos(b * t) + c2 * sin(b * t)
    text = f"{_e(a)}*({_num(c1)}*cos({_num(b)}*t)+{_num(c2)}*sin({_num(b)}*t))"
    return text, lambda t: exp(a * t) * (c1 * cos(b * t) + c2 * sin(b * t))


def _window(func, plan: SamplePlan, positive: bool):
    """Smallest shift (in steps of 0.05) that keeps the warp away from zero."""
    pts = np.array(plan.points)
    for step in range(0, 401):
        for off in ((step * 0.05,) if step == 0 else (step * 0.05, -step * 0.05)):
            vals = np.array([func(t + off) for t in pts])
            ok = np.all(vals > MIN_WARP) if positive else np.all(np.abs(vals) > MIN_WARP)
            if ok:
                return round(off, 10)
    raise ConstraintViolated("no zero-free window within |shift| <= 20")


def _require(cond, msg):
    if not cond:
        raise ConstraintViolated(msg)


# case registry: label -> FamilyCase
_CASES = {}


def _case(label, anchor, note, preset, kind, check, constant, draws):
    _CASES[label] = FamilyCase(label, anchor, note, preset, kind, check, constant, tuple(draws))


_case("thm5.1/1", "Thm 5.1(1)", "c₀ = 0", "warped-sphere", "LC", "einstein", "c0",
      [{"c0": 0, "c1": 1, "sign": 1}, {"c0": 0, "c1": 5, "sign": -1}])
_case("thm5.1/2", "Thm 5.1(2)", "c₀ > 0", "warped-sphere", "LC", "einstein", "c0",
      [{"c0": 2, "c2": 1}, {"c0": 1, "c2": -1}])
_case("thm5.1/3", "Thm 5.1(3)", "c₀ < 0", "warped-sphere", "LC", "einstein", "c0",
      [{"c0": -2, "c1": 2, "c2": 0}, {"c0": -1, "c1": 2, "c2": 2}])
_case("thm5.3/1", "Thm 5.3(1)", "c₀ = 0", "warped-heisenberg", "LC", "einstein", "c0",
      [{"c0": 0, "c1": 1}, {"c0": 0, "c1": 2.5}])
_case("thm5.3/2", "Thm 5.3(2)", "c₀ > 0", "warped-heisenberg", "LC", "einstein", "c0",
      [{"c0": 2, "c1": 1, "sign": 1}, {"c0": 0.5, "c1": 2, "sign": -1}])
for _thm, _kind, _anchor in (("thm5.4", "LC", "Thm 5.4"), ("thm5.6", "SSNM", "Thm 5.6")):
    _case(f"{_thm}/1", f"{_anchor}(1)", "λ₀ = 0", "warped-heisenberg", _kind, "scalar", "lambda0",
          [{"lambda0": 0, "c1": 1, "c2": 2}, {"lambda0": 0, "c1": 2, "c2": -0.5}])
    _case(f"{_thm}/2", f"{_anchor}(2)", "λ₀ > 0", "warped-heisenberg", _kind, "scalar", "lambda0",
          [{"lambda0": 8 / 3, "c1": 1, "c2": 0}, {"lambda0": 1, "c1": 1, "c2": 1}])
    _case(f"{_thm}/3", f"{_anchor}(3)", "λ₀ < 0", "warped-heisenberg", _kind, "scalar", "lambda0",
          [{"lambda0": -8 / 3, "c1": 1, "c2": 0}, {"lambda0": -1, "c1": 1, "c2": 1}])
_case("thm5.5/1", "Thm 5.5(1)", "λ₀ = −2/3", "warped-heisenberg", "SSM", "scalar", "lambda0",
      [{"lambda0": -2 / 3, "c1": 1, "c2": 1}, {"lambda0": -2 / 3, "c1": 2, "c2": 0.5}])
_case("thm5.5/2", "Thm 5.5(2)", "λ₀ > −2/3", "warped-heisenberg", "SSM", "scalar", "lambda0",
      [{"lambda0": 0, "c1": 1, "c2": 1}, {"lambda0": 2, "c1": 1, "c2": 0.5}])
_case("thm5.5/3", "Thm 5.5(3)", "λ₀ < −2/3", "warped-heisenberg", "SSM", "scalar", "lambda0",
      [{"lambda0": -2, "c1": 1, "c2": 0}, {"lambda0": -4 / 3, "c1": 1, "c2": 1}])

FAMILY_LABELS = tuple(_CASES)
VARIANTS = ("printed", "derived")


def family_case(label: str) -> FamilyCase:
    if label not in _CASES:
        raise KeyError(f"unknown family {label!r}; known: {', '.join(FAMILY_LABELS)}")
    return _CASES[label]


def _build_printed(label, p):
    """Warp function in its stated closed form; returns (text, callable, positive)."""
    thm, case = label.split("/")
    case = int(case)
    if thm == "thm5.1":
        c0 = p["c0"]
        if case == 1:
            _require(c0 == 0, "case (1) needs c0 = 0")
            s, c1 = p.get("sign", 1), p["c1"]
            _require(s in (1, -1), "sign must be +1 or -1")
            return f"{_num(2 * s)}*t+{_num(c1)}", lambda t: 2 * s * t + c1, False
        if case == 2:
            c2 = p["c2"]
            _require(c0 > 0 and c2 != 0, "case (2) needs c0 > 0 and c2 != 0")
            k = sqrt(c0 / 2)
            a = -2 / (c2 * c0)
            return _lin_combo(a, _e(k), c2, _e(-k)), lambda t: a * exp(k * t) + c2 * exp(-k * t), False
        c1, c2 = p["c1"], p["c2"]
        _require(c0 < 0, "case (3) needs c0 < 0")
        _require(abs(c1 * c1 + c2 * c2 + 8 / c0) <= 1e-12 * (1 + abs(8 / c0)), "case (3) needs c1^2 + c2^2 = -8/c0")
        k = sqrt(-c0 / 2)
        text = f"({_num(c1)}*cos({_num(k)}*t)+{_num(c2)}*sin({_num(k)}*t))"
        return text, lambda t: c1 * cos(k * t) + c2 * sin(k * t), False
    if thm == "thm5.3":
        c0 = p["c0"]
        if case == 1:
            _require(c0 == 0 and p["c1"] != 0, "case (1) needs c0 = 0 and c1 != 0")
            return _num(p["c1"]), lambda t: p["c1"], False
        _require(c0 > 0 and p["c1"] != 0, "case (2) needs c0 > 0 and a nonzero coefficient")
        k = sqrt(c0 / 2) * p.get("sign", 1)
        return f"{_num(p['c1'])}*{_e(k)}", lambda t: p["c1"] * exp(k * t), False
    lam = p["lambda0"]
    if thm in ("thm5.4", "thm5.6"):
        _require((lam == 0, lam > 0, lam < 0)[case - 1], f"case ({case}) has the wrong sign of lambda0")
        if case == 1:
            w = (f"({_num(p['c2'])}*t+{_num(p['c1'])})", lambda t: p["c2"] * t + p["c1"])
        else:
            w = _second_order(0.0, 3 * lam / 8, p["c1"], p["c2"])
    else:
        crit = -2 / 3
        _require(
            (abs(lam - crit) < 1e-12, lam > crit, lam < crit)[case - 1],
            f"case ({case}) has the wrong position of lambda0 relative to -2/3",
        )
        if case == 1:
            w = (f"({_num(p['c1'])}*exp(-0.5*t)+{_num(p['c2'])}*t*exp(-0.5*t))",
                 lambda t: (p["c1"] + p["c2"] * t) * exp(-t / 2))
        else:
            w = _second_order(1.0, 3 * lam / 8, p["c1"], p["c2"])
    return w[0], w[1], True


def _build_derived(label, p):
    """Engine-consistent families for the semi-symmetric cases."""
    thm = label.split("/")[0]
    lam = p["lambda0"]
    pp, q = (2.0, 3 * (lam - 2) / 8) if thm == "thm5.5" else (1.0, 3 * (lam + 2) / 8)
    text, func = _second_order(pp, q, p["c1"], p["c2"])
    return text, func, True


def family(label: str, case: int | None = None, params: dict | None = None, variant="printed",
           plan: SamplePlan = DEFAULT_PLAN) -> SolutionFamily:
    """Instance of a registered solution family.

    ``label`` is e.g. ``"thm5.1/2"``; alternatively pass ``"thm5.1"`` and
    ``case``.  ``params`` defaults to the first registered draw.  The
    ``derived`` variant (only for thm5.5 and thm5.6) solves the scalar
    curvature equation the engine computes for the semi-symmetric cases.
    """
    if case is not None and "/" not in label:
        label = f"{label}/{case}"
    fc = family_case(label)
    params = dict(fc.draws[0] if params is None else params)
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {VARIANTS}")
    if variant == "derived":
        if not label.startswith(("thm5.5", "thm5.6")):
            raise ValueError("derived families exist only for thm5.5 and thm5.6")
        text, func, positive = _build_derived(label, params)
    else:
        text, func, positive = _build_printed(label, params)
    shift = _window(func, plan, positive)
    use_plan = plan.shifted(shift) if shift else plan
    base = None
    if positive:
        base = parse_expr(text)
        text = f"({text})^(2/3)"
    f = parse_expr(text)
    notes = {"thm5.1/3": "c1^2 + c2^2 = -8/c0", "thm5.1/2": "f = -2/(c2 c0) e^{kt} + c2 e^{-kt}"}
    return SolutionFamily(
        label, fc, params, float(params[fc.constant]), f, base, variant, use_plan, shift, notes.get(label, "")
    )


def family_instances(variant="printed", labels=None):
    """Every registered draw of every family (or of ``labels``)."""
    out = []
    for label in labels or FAMILY_LABELS:
        if variant == "derived" and not label.startswith(("thm5.5", "thm5.6")):
            continue
        for params in family_case(label).draws:
            if variant == "derived":
                params = _derived_draw(label, params)
            out.append(family(label, params=params, variant=variant))
    return out


def _derived_draw(label, params):
    """Move lambda0 so the derived family stays in the same regime of its equation."""
    thm, case = label.split("/")
    crit = -2 / 3 if thm == "thm5.5" else -8 / 3
    lam = params["lambda0"]
    if case == "1":
        lam = crit
    elif case == "2" and lam <= crit:
        lam = crit + 1
    elif case == "3" and lam >= crit:
        lam = crit - 1
    return {**params, "lambda0": lam}


__all__ = [
    "CheckOutcome",
    "ConstraintViolated",
    "FAMILY_LABELS",
    "FamilyCase",
    "SolutionFamily",
    "family",
    "family_case",
    "family_instances",
    "has_constant_scalar",
    "is_einstein",
]
