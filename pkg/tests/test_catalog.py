import numpy as np
import pytest

from distgeo.catalog import (
    PRESET_ANCHORS,
    PRESET_NAMES,
    WARP_SAMPLES,
    ZeroWarp,
    evaluate_golden,
    flat_frame,
    manifold,
    preset,
)


@pytest.mark.parametrize("name", PRESET_NAMES)
def test_presets_have_anchors_and_golden(name):
    p = preset(name)
    assert PRESET_ANCHORS[name] == p.anchor
    assert len(p.golden) > 10


def test_heisenberg_golden_matches():
    p = preset("heisenberg3")
    assert all(g.match for g in evaluate_golden(p.manifold, p.golden, tol=1e-9))


@pytest.mark.parametrize("f", WARP_SAMPLES)
@pytest.mark.parametrize("name", ["warped-sphere", "warped-heisenberg"])
def test_levi_civita_warped_golden_matches(name, f):
    p = preset(name, f)
    lc = [g for g in p.golden if g.spec.kind == "LC" and g.label not in ("Eq 5.16",)]
    assert all(r.match for r in evaluate_golden(p.manifold, lc))


def test_ledger_rows_carry_both_values():
    p = preset("sphere3")
    rows = [g.as_dict() for g in evaluate_golden(p.manifold, p.golden)]
    assert {"key", "paper_eq", "paper_value", "engine_value", "residual", "match"} <= set(rows[0])
    bad = [r for r in rows if not r["match"]]
    assert bad and all(r["paper_value"] != r["engine_value"] for r in bad)


def test_unknown_preset():
    with pytest.raises(KeyError):
        manifold("torus")


def test_flat_frame_twist_brackets():
    frame = flat_frame(4, {(1, 2): "1"}).sample()
    e = frame.basis()
    br = frame.bracket(e[0], e[1]).values
    assert np.allclose(np.abs(br[2]), 1.0)


def test_warp_zero_rejected():
    with pytest.raises(ZeroWarp):
        preset("warped-heisenberg", "t-1.1")
