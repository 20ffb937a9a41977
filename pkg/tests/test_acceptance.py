"""Acceptance criteria 1-9, one PASS/FAIL line each at the pinned tolerance.

Run with ``pytest tests/test_acceptance.py -v`` or ``python tests/test_acceptance.py``.
"""

import json
import subprocess
import sys
import time

import numpy as np
import pytest
from conftest import ACCEPTANCE_LINES

from distgeo import chen
from distgeo.catalog import WARP_SAMPLES, evaluate_golden, manifold, preset
from distgeo.connections import ConnectionSpec
from distgeo.curvature import is_mixed_ricci_flat
from distgeo.distribution import Distribution
from distgeo.einstein import family_instances
from distgeo.report import (
    all_distributions,
    catalog_manifolds,
    chen_draw,
    identity_suite,
    reduction_check,
    standard_connections,
)

# table lines whose listed values disagree with the definitions (see the decisions ledger)
KNOWN_TABLE_CONFLICTS = {"Eq 5.16"} | {f"Eq 5.{k}" for k in range(26, 36)} | {f"Eq 5.{k}" for k in range(55, 63)}


def report(n, ok, detail):
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}"
    print(line)
    ACCEPTANCE_LINES.append(line)
    return ok


def _golden(name, f=None, tol=1e-9):
    p = preset(name, f)
    return evaluate_golden(p.manifold, p.golden, tol=tol)


def test_criterion_1_sphere_tables():
    start = time.perf_counter()
    rows = _golden("sphere3")
    elapsed = time.perf_counter() - start
    named = {
        "nabla[LC](X1,X2)": "X3",
        "B[LC](X1,X2) D={X1,X2}": "X3",
        "H[SSM]() D={X1,X2}": "-X3",
        "A[SSM](X3,X1) D={X1,X2}": "X2-X1",
        "R_D[SSM](X1,X2,X1) D={X1,X2}": "-4X2",
        "K_D[SSM](X1,X2) D={X1,X2}": "4",
        "tau_D[SSM]() D={X1,X2}": "4",
        "R_D[SSNM](X1,X2,X1) D={X1,X2}": "-5X2",
        "K_D[SSNM](X1,X3) D={X1,X3}": "1/2",
    }
    by_key = {r.key: r for r in rows}
    missed = [f"{k}={v}" for k, v in named.items() if not by_key[k].match]
    bad = [f"{r.label} {r.key}" for r in rows if not r.match]
    ok = not bad and elapsed < 1.0
    detail = f"{len(rows) - len(bad)}/{len(rows)} entries < 1e-9, {elapsed:.2f}s"
    if bad:
        detail += f"; mismatched: {'; '.join(bad)}; named items off: {', '.join(missed) or 'none'}"
    assert report(1, ok, detail)


def test_criterion_2_heisenberg_tables():
    rows = _golden("heisenberg3")
    by_key = {r.key: r for r in rows}
    flat = by_key["R_D[SSM](e1,e2,e1) D={e1,e2}"]
    ssnm = by_key["R_D[SSNM](e1,e2,e1) D={e1,e2}"]
    bad = [r.key for r in rows if not r.match]
    ok = not bad and flat.match and ssnm.match
    worst = max(r.residual for r in rows)
    assert report(2, ok, f"{len(rows)} entries, max residual {worst:.1e} < 1e-9, mismatched: {bad or 'none'}")


def test_criterion_3_warped_tables():
    total, mism, unexpected, malformed = 0, 0, [], 0
    for name in ("warped-sphere", "warped-heisenberg"):
        for f in WARP_SAMPLES:
            for r in _golden(name, f, tol=1e-8):
                total += 1
                row = r.as_dict()
                if not (row["paper_value"] and row["engine_value"] and np.isfinite(row["residual"])):
                    malformed += 1
                if not r.match:
                    mism += 1
                    if r.label not in KNOWN_TABLE_CONFLICTS:
                        unexpected.append(f"{name}[{f}] {r.label} {r.key}")
    ok = not unexpected and not malformed
    detail = (
        f"{total} entries x 17 points at 1e-8; {total - mism} reproduced; {mism} ledger findings "
        f"(both values emitted, all on logged conflict lines); unexpected: {unexpected or 'none'}"
    )
    assert report(3, ok, detail)


def test_criterion_4_identity_suite():
    start = time.perf_counter()
    rows = identity_suite(catalog_manifolds(), extra_random=50, seed=42)
    elapsed = time.perf_counter() - start
    worst = max(r["max_residual"] for r in rows)
    fails = [r["name"] for r in rows if r["max_residual"] >= 1e-9]
    ok = not fails and elapsed < 30.0
    assert report(4, ok, f"{len(rows)} scenarios, max residual {worst:.1e} < 1e-9, {elapsed:.1f}s < 30s, failures: {fails or 'none'}")


def test_criterion_5_reductions():
    worst, count = 0.0, 0
    for _, man in catalog_manifolds():
        frame = man.sample()
        for spec in standard_connections(man)[1:]:
            for idx in all_distributions(man.m):
                res = reduction_check(Distribution(frame, idx), spec)
                worst = max(worst, res["max_residual"])
                count += 1
    ok = worst < 1e-12
    assert report(5, ok, f"{count} zero-parameter reductions (SSM, SSNM, STAT, STAT_DUAL), max residual {worst:.1e} < 1e-12")


def test_criterion_6_family_round_trips():
    fams = family_instances("printed")
    trip_fail, ctrl_fail = [], []
    for fam in fams:
        rt = fam.round_trip()
        if not (rt.holds and rt.residual < 1e-8):
            trip_fail.append(f"{fam.label}({rt.residual:.2g})")
        ctl = fam.perturbed()
        if not ctl.residual > 1e-3:
            ctrl_fail.append(f"{fam.label}({ctl.residual:.1g})")
    derived = family_instances("derived")
    derived_ok = sum(1 for fam in derived if fam.round_trip().holds)
    cases = len({fam.label for fam in fams})
    ok = not trip_fail and not ctrl_fail
    detail = (
        f"{cases} cases, {len(fams)} draws: round trip < 1e-8 failed {len(trip_fail)} {trip_fail or ''}; "
        f"+0.1 control not > 1e-3 for {len(ctrl_fail)} {ctrl_fail or ''}; "
        f"derived semi-symmetric families {derived_ok}/{len(derived)} pass"
    )
    assert report(6, ok, detail)


def test_criterion_7_chen_suite():
    rng = np.random.default_rng(42)
    min_slack, two_path = np.inf, 0.0
    for _ in range(100):
        dist, u, plane, x = chen_draw(rng)
        for kind in ("SSM", "SSNM"):
            spec = ConnectionSpec(kind, u)
            for res in (chen.chen_first(dist, spec, plane, 0.0), chen.chen_ricci(dist, spec, x, 0.0)):
                min_slack = min(min_slack, float(res.slack.min()))
                two_path = max(two_path, res.two_path_residual)
    h = np.random.default_rng(7).normal(size=(2, 4, 4, 10_000))
    lem = chen.algebraic_lemmas(h)
    gap48 = float((lem["rhs48"] - lem["lhs48"]).min())
    gap54 = float((lem["rhs54"] - lem["lhs54"]).min())
    ok = min_slack >= -1e-9 and two_path < 1e-9 and gap48 >= -1e-12 and gap54 >= -1e-12
    detail = (
        f"100 draws x {{SSM, SSNM}}: min slack {min_slack:.1e} >= -1e-9, two-path {two_path:.1e} < 1e-9; "
        f"lemmas on 10^4 arrays: min gaps {gap48:.2e}, {gap54:.2e}"
    )
    assert report(7, ok, detail)


def test_criterion_8_mixed_ricci_flat():
    spec = ConnectionSpec("SSM", ("1", "0", "0", "0"))
    const = manifold("warped-sphere", "2").sample()
    flat_c, _, _ = is_mixed_ricci_flat(Distribution(const, (0, 1, 2)), spec)
    exp_frame = manifold("warped-sphere", "exp(t)").sample()
    flat_e, worst, ric = is_mixed_ricci_flat(Distribution(exp_frame, (0, 1, 2)), spec)
    off = ric.values[1, 0]
    matches = np.allclose(off, -1.0, atol=1e-9)
    ok = flat_c and not flat_e and matches
    detail = f"f = 2: flat={flat_c}; f = e^t: flat={flat_e}, Ric(X1, dt) = {off[0]:.3g} (expected -1 at all points: {matches})"
    assert report(8, ok, detail)


def _verify_all_output():
    proc = subprocess.run(
        [sys.executable, "-m", "distgeo", "verify-all", "--seed", "42"], capture_output=True, text=True
    )
    data = json.loads(proc.stdout)
    data.pop("timing_ms")
    return proc.returncode, json.dumps(data, sort_keys=False)


def test_criterion_9_determinism():
    code1, first = _verify_all_output()
    code2, second = _verify_all_output()
    ok = first == second and code1 == code2 == 0
    assert report(9, ok, f"two verify-all --seed 42 runs byte-identical modulo timing: {first == second}, exit codes {code1}, {code2}")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
