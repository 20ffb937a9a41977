"""Scenario files, check orchestration and JSON reports.

A scenario is a JSON object with expression-string leaves::

    {"manifold": "sphere3", "distribution": [1, 2],
     "connection": {"kind": "ssm", "U": ["1", "0", "1"]},
     "checks": ["gauss", "codazzi", "ricci", "golden"]}

Indices in scenario files are 1-based.  Check results are either *checks*
(engine self-consistency; a failure is fatal) or *findings* (engine values
compared with printed values; fatal only in strict mode).
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field

import numpy as np

from . import chen as chen_mod
from .catalog import PRESET_NAMES, WARP_SAMPLES, evaluate_golden, flat_frame, manifold, preset
from .connections import ConnectionSpec, ambient_connection, verify_characterization
from .curvature import (
    curvature_d_table,
    is_mixed_ricci_flat,
    tensoriality_residual,
    verify_codazzi,
    verify_curvature_paths,
    verify_gauss,
    verify_ricci_eq,
)
from .distribution import Distribution
from .einstein import FAMILY_LABELS, family_instances, has_constant_scalar, is_einstein
from .frame import FrameManifold
from .scalarfield import DEFAULT_PLAN, SamplePlan, parse_expr, render

CHECKS = (
    "gauss",
    "codazzi",
    "ricci",
    "paths",
    "characterization",
    "tensoriality",
    "reduction",
    "golden",
    "einstein",
    "constant_scalar",
    "mixed_ricci_flat",
    "chen_first",
    "chen_ricci",
)
SCENARIO_KEYS = {
    "name",
    "manifold",
    "f",
    "distribution",
    "connection",
    "declared_c",
    "checks",
    "sample_plan",
    "c0",
    "lambda0",
    "plane",
    "X",
}
REDUCTION_TOL = 1e-12
IDENTITY_TOL = 1e-9


class ScenarioError(ValueError):
    """Malformed or inconsistent scenario input."""


# -- scenario loading -------------------------------------------------------------------------


@dataclass
class Scenario:
    data: dict
    manifold: FrameManifold
    preset_name: str | None
    distribution: tuple  # 0-based
    spec: ConnectionSpec
    checks: tuple
    plan: SamplePlan = DEFAULT_PLAN
    declared_c: float | None = None
    dist: Distribution | None = field(default=None, repr=False)

    def echo(self) -> dict:
        return {
            "name": self.data.get("name", ""),
            "manifold": self.preset_name or self.manifold.describe(),
            "f": self.data.get("f"),
            "distribution": [i + 1 for i in self.distribution],
            "connection": self.spec.describe(),
            "declared_c": self.declared_c,
            "checks": list(self.checks),
            "sample_plan": {
                "points": list(self.plan.points),
                "abs_tol": self.plan.abs_tol,
                "rel_tol": self.plan.rel_tol,
            },
        }


def _triple_key(key: str, m: int, what: str):
    try:
        parts = tuple(int(p) - 1 for p in str(key).split(","))
    except ValueError as exc:
        raise ScenarioError(f"{what} key {key!r} must be comma-separated integers") from exc
    if not all(0 <= p < m for p in parts):
        raise ScenarioError(f"{what} key {key!r} out of range 1..{m}")
    return parts


def _inline_manifold(spec: dict) -> FrameManifold:
    try:
        names = tuple(spec["names"])
        metric = [parse_expr(str(g)) for g in spec["metric"]]
    except KeyError as exc:
        raise ScenarioError(f"inline manifold needs {exc.args[0]!r}") from exc
    m = len(names)
    weights = [parse_expr(str(w)) for w in spec.get("weights", ["0"] * m)]
    brackets = {}
    for key, terms in spec.get("brackets", {}).items():
        i, j = _triple_key(key, m, "bracket")
        brackets[(i, j)] = {int(k) - 1: parse_expr(str(v)) for k, v in terms.items()}
    return FrameManifold.from_brackets(names, metric, brackets, weights, spec.get("label", "inline"))


def _plan(spec) -> SamplePlan:
    if spec is None:
        return DEFAULT_PLAN
    return SamplePlan(
        tuple(spec.get("points", DEFAULT_PLAN.points)),
        float(spec.get("abs_tol", DEFAULT_PLAN.abs_tol)),
        float(spec.get("rel_tol", DEFAULT_PLAN.rel_tol)),
    )


def _connection(spec: dict | None, m: int) -> ConnectionSpec:
    if spec is None:
        return ConnectionSpec("LC")
    kind = spec.get("kind", "LC")
    u = spec.get("U")
    k = spec.get("K")
    if u is not None:
        if len(u) != m:
            raise ScenarioError(f"U needs {m} components, got {len(u)}")
        u = tuple(parse_expr(str(x)) for x in u)
    if k is not None:
        k = {_triple_key(key, m, "K"): parse_expr(str(v)) for key, v in k.items()}
    return ConnectionSpec(kind, u, k)


def build_scenario(data: dict) -> Scenario:
    """Validate and build every module input; raises ScenarioError (or a parse error)."""
    if not isinstance(data, dict):
        raise ScenarioError("scenario must be a JSON object")
    unknown = sorted(set(data) - SCENARIO_KEYS)
    if unknown:
        raise ScenarioError(f"unknown scenario fields: {', '.join(unknown)}")
    checks = tuple(data.get("checks", ()))
    bad = [c for c in checks if c not in CHECKS]
    if bad:
        raise ScenarioError(f"unknown checks: {', '.join(bad)}; known: {', '.join(CHECKS)}")
    plan = _plan(data.get("sample_plan"))
    man_spec = data.get("manifold")
    preset_name = None
    if isinstance(man_spec, str):
        if man_spec not in PRESET_NAMES:
            raise ScenarioError(f"unknown preset {man_spec!r}; choose from {', '.join(PRESET_NAMES)}")
        preset_name = man_spec
        f = data.get("f")
        man = manifold(man_spec, parse_expr(str(f)) if f is not None else None, plan)
    elif isinstance(man_spec, dict):
        man = _inline_manifold(man_spec)
    else:
        raise ScenarioError("manifold must be a preset name or an inline frame object")
    frame = man.sample(plan)
    frame.validate()
    dist_idx = data.get("distribution")
    if not dist_idx:
        raise ScenarioError("distribution (1-based frame indices) is required")
    dist = Distribution.from_one_based(frame, dist_idx)
    spec = _connection(data.get("connection"), man.m)
    ambient_connection(frame, spec)  # validates U and K
    c = data.get("declared_c")
    return Scenario(
        data, man, preset_name, dist.indices, spec, checks, plan, None if c is None else float(c), dist
    )


def load_scenario(path) -> Scenario:
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    return build_scenario(data)


# -- individual checks ------------------------------------------------------------------------


def _curv(rep):
    return rep.as_dict()


def reduction_check(dist: Distribution, spec: ConnectionSpec) -> dict:
    """Zero U or K must reproduce the Levi-Civita tables (ambient, induced, B, R^D)."""
    frame = dist.frame
    lc = ConnectionSpec("LC")
    ref_amb = frame.levi_civita
    ref_rd = curvature_d_table(dist, lc)
    worst = 0.0
    kinds = [spec.with_zero_parameter()]
    if spec.is_statistical:
        kinds.append(spec.with_zero_parameter().dual())
    for zero in kinds:
        amb = ambient_connection(frame, zero)
        worst = max(worst, (amb - ref_amb).max_abs(), (curvature_d_table(dist, zero) - ref_rd).max_abs())
    return {
        "name": f"reduction/{spec.kind}",
        "pass": worst < REDUCTION_TOL,
        "max_residual": worst,
        "tol": REDUCTION_TOL,
    }


def _chen_dict(res):
    return res.as_dict()


def _one_based_plane(sc: Scenario):
    plane = sc.data.get("plane")
    if plane is None:
        return (None, None)
    out = []
    for v in plane:
        out.append(int(v) - 1 if np.ndim(v) == 0 else [float(x) for x in v])
    return tuple(out)


def _one_based_x(sc: Scenario):
    x = sc.data.get("X")
    if x is None:
        return None
    return int(x) - 1 if np.ndim(x) == 0 else [float(v) for v in x]


def run_check(sc: Scenario, name: str, strict_golden=False):
    """Returns ``(check dicts, golden dicts)``."""
    dist, spec = sc.dist, sc.spec
    if name == "gauss":
        return [_curv(verify_gauss(dist, spec))], []
    if name == "codazzi":
        return [_curv(verify_codazzi(dist, spec))], []
    if name == "ricci":
        return [_curv(verify_ricci_eq(dist, spec))], []
    if name == "paths":
        return [_curv(verify_curvature_paths(dist, spec))], []
    if name == "characterization":
        return [r.as_dict() for r in verify_characterization(dist, spec)], []
    if name == "tensoriality":
        res = tensoriality_residual(dist, spec)
        tol = sc.plan.abs_tol
        return [{"name": "tensoriality", "pass": res < tol, "max_residual": res, "tol": tol}], []
    if name == "reduction":
        return [reduction_check(dist, spec)], []
    if name == "golden":
        if sc.preset_name is None:
            raise ScenarioError("golden values exist only for preset manifolds")
        entries = preset(sc.preset_name, sc.data.get("f"), sc.plan).golden
        ledger = [g.as_dict() for g in evaluate_golden(sc.manifold, entries, sc.plan)]
        mism = sum(1 for g in ledger if not g["match"])
        check = {
            "name": "golden",
            "pass": (mism == 0) if strict_golden else True,
            "entries": len(ledger),
            "mismatches": mism,
            "strict": bool(strict_golden),
        }
        return [check], ledger
    if name == "einstein":
        out = is_einstein(dist, spec, sc.data.get("c0"))
        return [{"name": "einstein", **out.as_dict(), "max_residual": out.residual}], []
    if name == "constant_scalar":
        out = has_constant_scalar(dist, spec, sc.data.get("lambda0"))
        return [{"name": "constant_scalar", **out.as_dict(), "max_residual": out.residual}], []
    if name == "mixed_ricci_flat":
        flat, worst, ric = is_mixed_ricci_flat(dist, spec)
        idx = list(dist.indices)
        vals = ric.values
        off = {
            f"{sc.manifold.names[a]},{sc.manifold.names[b]}": [float(v) for v in vals[a, b]]
            for a in idx
            for b in idx
            if a != b and np.max(np.abs(vals[a, b])) > dist.tol
        }
        return [{"name": "mixed_ricci_flat", "pass": bool(flat), "holds": bool(flat), "worst": worst, "nonzero": off}], []
    if name == "chen_first":
        res = chen_mod.chen_first(dist, spec, _one_based_plane(sc), sc.declared_c)
        return [_chen_dict(res)], []
    if name == "chen_ricci":
        res = chen_mod.chen_ricci(dist, spec, _one_based_x(sc), sc.declared_c)
        return [_chen_dict(res)], []
    raise ScenarioError(f"unknown check {name!r}")


def _max_residual(checks):
    vals = [c["max_residual"] for c in checks if "max_residual" in c]
    return float(max(vals)) if vals else 0.0


def run_scenario(sc: Scenario, strict_golden=False) -> dict:
    checks, golden = [], []
    for pos, name in enumerate(sc.checks):
        try:
            got, ledger = run_check(sc, name, strict_golden)
        except (ValueError, ArithmeticError) as exc:
            got = [{"name": name, "pass": False, "error": f"{type(exc).__name__}: {exc}", "at": f"checks[{pos}]"}]
            ledger = []
        checks.extend(got)
        golden.extend(ledger)
    ok = all(c["pass"] for c in checks)
    return {
        "scenario": sc.echo(),
        "checks": checks,
        "golden": golden,
        "summary": {
            "pass": bool(ok),
            "max_residual": _max_residual(checks),
            "golden_mismatches": sum(1 for g in golden if not g["match"]),
        },
    }


# -- verify-all ---------------------------------------------------------------------------------


def _poly(rng, scale=1.0):
    a, b, c = (float(np.round(v, 3)) for v in rng.uniform(-scale, scale, 3))
    return f"{a}+{b}*t+{c}*t^2"


def random_u(m: int, rng) -> tuple:
    return tuple(_poly(rng) for _ in range(m))


def random_k(man: FrameManifold, rng, density=0.5) -> dict:
    """Random K with a totally symmetric cubic form: K[i,j,k] = C_ijk / g_k."""
    m = man.m
    out = {}
    for tri in itertools.combinations_with_replacement(range(m), 3):
        if rng.uniform() > density:
            continue
        val = _poly(rng, 0.5)
        for i, j, k in set(itertools.permutations(tri)):
            out[(i, j, k)] = parse_expr(f"({val})/({render(man.metric[k])})")
    return out


def standard_connections(man: FrameManifold, u=None, k=None) -> list:
    m = man.m
    u = u or tuple(["1"] + ["0"] * (m - 2) + ["1"])
    if k is None:
        k = {}
        for i, j, l in set(itertools.permutations((0, 0, m - 1))):
            k[(i, j, l)] = parse_expr(f"(1/2)/({render(man.metric[l])})")
    return [
        ConnectionSpec("LC"),
        ConnectionSpec("SSM", u),
        ConnectionSpec("SSNM", u),
        ConnectionSpec("STAT", None, k),
    ]


def all_distributions(m: int):
    for r in range(1, m):
        for idx in itertools.combinations(range(m), r):
            yield idx


def identity_entry(dist, spec, label) -> dict:
    reps = [verify_gauss(dist, spec), verify_codazzi(dist, spec), verify_ricci_eq(dist, spec), verify_curvature_paths(dist, spec)]
    worst = max(r.max_residual for r in reps)
    return {
        "name": label,
        "pass": all(r.max_residual < IDENTITY_TOL for r in reps),
        "max_residual": worst,
        "residuals": {r.identity: r.max_residual for r in reps},
    }


def identity_suite(manifolds, extra_random=0, seed=42):
    out = []
    for name, man in manifolds:
        frame = man.sample()
        for spec in standard_connections(man):
            for idx in all_distributions(man.m):
                dist = Distribution(frame, idx)
                lab = f"identities/{name}/{spec.kind}/D={''.join(str(i + 1) for i in idx)}"
                out.append(identity_entry(dist, spec, lab))
    rng = np.random.default_rng(seed)
    names = [n for n, _ in manifolds]
    for draw in range(extra_random):
        name = names[int(rng.integers(len(names)))]
        man = dict(manifolds)[name]
        frame = man.sample()
        kind = ("SSM", "SSNM", "STAT")[int(rng.integers(3))]
        if kind == "STAT":
            spec = ConnectionSpec("STAT", None, random_k(man, rng))
        else:
            spec = ConnectionSpec(kind, random_u(man.m, rng))
        subsets = list(all_distributions(man.m))
        idx = subsets[int(rng.integers(len(subsets)))]
        dist = Distribution(frame, idx)
        lab = f"random/{draw}/{name}/{kind}/D={''.join(str(i + 1) for i in idx)}"
        out.append(identity_entry(dist, spec, lab))
    return out


def catalog_manifolds(warps=("exp(t)",)):
    out = [("sphere3", manifold("sphere3")), ("heisenberg3", manifold("heisenberg3"))]
    for f in warps:
        out.append((f"warped-sphere[{f}]", manifold("warped-sphere", f)))
        out.append((f"warped-heisenberg[{f}]", manifold("warped-heisenberg", f)))
    return out


def chen_draw(rng, m=6, rank=4):
    """One randomized flat-frame Chen scenario: (distribution, U, plane, X)."""
    idx = tuple(sorted(int(i) for i in rng.choice(m, rank, replace=False)))
    others = [int(i) for i in rng.permutation(np.arange(1, m))]
    twists = {}
    for p in range(min(2, len(others) // 2)):
        a, b = others[2 * p], others[2 * p + 1]
        if rng.uniform() < 0.8:
            twists[(a, b)] = _poly(rng, 2.0)
    frame = flat_frame(m, twists).sample()
    dist = Distribution(frame, idx)
    u = random_u(m, rng)
    plane = (rng.normal(size=rank), rng.normal(size=rank))
    x = rng.normal(size=rank)
    return dist, u, plane, x / np.linalg.norm(x)


def chen_suite(draws=25, seed=42):
    rng = np.random.default_rng(seed)
    checks, findings = [], []
    worst_slack, worst_two, worst_id, printed_violations = np.inf, 0.0, 0.0, 0
    for _ in range(draws):
        dist, u, plane, x = chen_draw(rng)
        for kind in ("SSM", "SSNM"):
            spec = ConnectionSpec(kind, u)
            for res in (chen_mod.chen_first(dist, spec, plane, 0.0), chen_mod.chen_ricci(dist, spec, x, 0.0)):
                worst_slack = min(worst_slack, float(res.slack.min()))
                worst_two = max(worst_two, res.two_path_residual)
                worst_id = max(worst_id, res.identity_residual)
                if "slack_lambda" in res.extra and res.extra["slack_lambda"].min() < -res.tol:
                    printed_violations += 1
    checks.append({
        "name": "chen/flat6",
        "pass": worst_slack >= -1e-9 and worst_two < 1e-9 and worst_id < 1e-9,
        "draws": draws,
        "min_slack": worst_slack,
        "max_residual": max(worst_two, worst_id),
        "two_path_residual": worst_two,
        "identity_residual": worst_id,
    })
    findings.append({
        "name": "chen/ricci-ssnm-printed-lambda",
        "pass": printed_violations == 0,
        "violations": printed_violations,
        "draws": draws,
    })
    s3 = manifold("sphere3").sample()
    for idx in itertools.combinations(range(3), 2):
        dist = Distribution(s3, idx)
        for kind in ("SSM", "SSNM"):
            res = chen_mod.chen_ricci(dist, ConnectionSpec(kind, ("1", "0", "1")), None, 1.0)
            d = res.as_dict()
            d["name"] = f"chen/sphere3/D={''.join(str(i + 1) for i in idx)}/{kind}"
            d["max_residual"] = max(res.two_path_residual, res.identity_residual)
            d.pop("slack_lambda", None)
            d.pop("identity_residual_lambda", None)
            checks.append(d)
    h = np.random.default_rng(seed).normal(size=(2000, 2, 4, 4))
    lem = chen_mod.algebraic_lemmas(h.transpose(1, 2, 3, 0))
    gap = min(float((lem["rhs48"] - lem["lhs48"]).min()), float((lem["rhs54"] - lem["lhs54"]).min()))
    checks.append({"name": "chen/lemmas", "pass": gap >= -1e-12, "min_gap": gap, "draws": 2000})
    return checks, findings


def _family_tag(fam):
    params = ",".join(f"{k}={v:g}" for k, v in fam.describe()["params"].items())
    return f"{fam.label}[{params}]"


def family_suite():
    checks, findings = [], []
    for fam in family_instances("printed"):
        ode = fam.ode_residuals()
        tag = _family_tag(fam)
        worst = max(ode.values())
        checks.append({"name": f"family-ode/{tag}", "pass": worst < 1e-8, "max_residual": worst, "f": fam.f_text})
        rt = fam.round_trip()
        pert = fam.perturbed()
        findings.append({
            "name": f"family-roundtrip/{tag}",
            "pass": rt.holds,
            "residual": rt.residual,
            "f": fam.f_text,
            "window_shift": fam.shift,
        })
        findings.append({"name": f"family-control/{tag}", "pass": pert.residual > 1e-3, "residual": pert.residual})
    for fam in family_instances("derived"):
        rt = fam.round_trip()
        ode = max(fam.ode_residuals().values())
        tag = _family_tag(fam)
        checks.append({
            "name": f"family-derived/{tag}",
            "pass": rt.holds and ode < 1e-8,
            "max_residual": max(rt.residual, ode),
            "f": fam.f_text,
        })
    return checks, findings


def golden_suite():
    ledger = []
    for name in ("sphere3", "heisenberg3"):
        p = preset(name)
        for g in evaluate_golden(p.manifold, p.golden):
            ledger.append({"preset": name, **g.as_dict()})
    for name in ("warped-sphere", "warped-heisenberg"):
        for f in WARP_SAMPLES:
            p = preset(name, f)
            for g in evaluate_golden(p.manifold, p.golden):
                ledger.append({"preset": f"{name}[{f}]", **g.as_dict()})
    return ledger


def mixed_ricci_suite():
    out = []
    for f, expect in (("2", True), ("exp(t)", False)):
        frame = manifold("warped-sphere", f).sample()
        dist = Distribution(frame, (0, 1, 2))
        flat, worst, _ = is_mixed_ricci_flat(dist, ConnectionSpec("SSM", ("1", "0", "0", "0")))
        out.append({"name": f"mixed-ricci-flat/warped-sphere[{f}]", "pass": flat == expect, "holds": flat, "worst": worst})
    return out


def verify_all(seed=42, strict_golden=False, chen_draws=25, random_scenarios=50) -> dict:
    checks, findings = [], []
    checks.extend(identity_suite(catalog_manifolds(), random_scenarios, seed))
    for name, man in catalog_manifolds():
        frame = man.sample()
        for spec in standard_connections(man)[1:]:
            for idx in all_distributions(man.m):
                red = reduction_check(Distribution(frame, idx), spec)
                red["name"] = f"reduction/{name}/{spec.kind}/D={''.join(str(i + 1) for i in idx)}"
                checks.append(red)
    c, f = chen_suite(chen_draws, seed)
    checks.extend(c)
    findings.extend(f)
    c, f = family_suite()
    checks.extend(c)
    findings.extend(f)
    findings.extend(mixed_ricci_suite())
    golden = golden_suite()
    mism = sum(1 for g in golden if not g["match"])
    fail_checks = [c["name"] for c in checks if not c["pass"]]
    fail_findings = [f["name"] for f in findings if not f["pass"]]
    ok = not fail_checks and (not strict_golden or (mism == 0 and not fail_findings))
    return {
        "scenario": {"command": "verify-all", "seed": seed, "strict_golden": bool(strict_golden),
                     "families": list(FAMILY_LABELS)},
        "checks": checks,
        "findings": findings,
        "golden": golden,
        "summary": {
            "pass": bool(ok),
            "max_residual": _max_residual(checks),
            "checks": len(checks),
            "check_failures": fail_checks,
            "findings": len(findings),
            "finding_failures": fail_findings,
            "golden_entries": len(golden),
            "golden_mismatches": mism,
        },
    }


def dumps(report: dict) -> str:
    return json.dumps(report, indent=2, ensure_ascii=False, default=_json_default) + "\n"


def _json_default(obj):
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"cannot serialize {type(obj).__name__}")


__all__ = [
    "CHECKS",
    "Scenario",
    "ScenarioError",
    "build_scenario",
    "dumps",
    "load_scenario",
    "run_scenario",
    "verify_all",
]
