"""Built-in example geometries, their distinguished distributions, and golden tables.

Golden values are data: each entry names a quantity, the frame arguments it is
evaluated on, the expected value (as expressions in ``t``), and an anchor label.
:func:`evaluate_golden` compares an entry against the engine and never raises on
a mismatch.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .connections import ConnectionSpec, DirectGeometry, ambient_connection
from .curvature import curvature_d_table, ricci_D, scalar_tau, sectional
from .distribution import Distribution
from .frame import FrameManifold
from .jets import JetArray
from .scalarfield import (
    DEFAULT_PLAN,
    ONE,
    ZERO,
    DomainError,
    Expr,
    SamplePlan,
    derive,
    eval_values,
    lift,
    render,
)


class ZeroWarp(ValueError):
    """The warping function vanishes at a sample point."""


# -- manifolds ---------------------------------------------------------------------------


def sphere3() -> FrameManifold:
    return FrameManifold.from_brackets(
        ("X1", "X2", "X3"),
        (1, 1, 1),
        {(0, 1): {2: 2}, (0, 2): {1: -2}, (1, 2): {0: 2}},
        label="sphere3",
    )


def heisenberg3() -> FrameManifold:
    return FrameManifold.from_brackets(("e1", "e2", "e3"), (1, 1, 1), {(0, 1): {2: 1}}, label="heisenberg3")


def _check_warp(f: Expr, plan: SamplePlan):
    try:
        vals = eval_values(f, plan.points)
    except DomainError as exc:
        raise ZeroWarp(f"warping function undefined at t={exc.t}") from exc
    bad = np.abs(vals) <= plan.abs_tol
    if np.any(bad):
        t = plan.points[int(np.argmax(bad))]
        raise ZeroWarp(f"warping function {render(f)} vanishes at t={t}")


def _warp(base: FrameManifold, f, fiber_names, label, plan):
    f = lift(f)
    _check_warp(f, plan)
    brackets = {}
    for (i, j, k), e in base.structure.items():
        if i < j:
            brackets.setdefault((i + 1, j + 1), {})[k + 1] = e
    return FrameManifold.from_brackets(
        ("dt",) + tuple(fiber_names),
        (ONE, f * f, f * f, ONE),
        brackets,
        weights=(ONE, ZERO, ZERO, ZERO),
        label=f"{label}(f={render(f)})",
    )


def warped_sphere(f="2*t+1", plan: SamplePlan = DEFAULT_PLAN) -> FrameManifold:
    """R x S^3 with the first two sphere directions scaled by f(t)."""
    return _warp(sphere3(), f, ("X1", "X2", "X3"), "warped-sphere", plan)


def warped_heisenberg(f="2*t+1", plan: SamplePlan = DEFAULT_PLAN) -> FrameManifold:
    return _warp(heisenberg3(), f, ("e1", "e2", "e3"), "warped-heisenberg", plan)


def flat_frame(m: int, twists=None, label="") -> FrameManifold:
    """Orthonormal frame of flat R^m with E_1 = d/dt.

    ``twists`` maps a pair ``(a, b)`` to ``theta'(t)``: the fields a, b are
    rotated by ``theta(t)``, so ``[E_1, E_a] = theta' E_b`` and
    ``[E_1, E_b] = -theta' E_a``.  Pairs must be disjoint and avoid index 0.
    """
    brackets = {}
    used = set()
    for (a, b), rate in (twists or {}).items():
        if 0 in (a, b) or a == b or used & {a, b}:
            raise ValueError("twist pairs must be disjoint and avoid the t direction")
        used |= {a, b}
        rate = lift(rate)
        brackets.setdefault((0, a), {})[b] = rate
        brackets.setdefault((0, b), {})[a] = -rate
    names = tuple(f"E{i + 1}" for i in range(m))
    weights = (ONE,) + (ZERO,) * (m - 1)
    return FrameManifold.from_brackets(names, (ONE,) * m, brackets, weights, label or f"flat{m}")


# -- golden tables -----------------------------------------------------------------------

QUANTITIES = ("nabla", "nabla_D", "B", "A", "Lperp", "H", "R", "R_D", "K_D", "tau_D", "Ric", "s", "Ric_D", "s_D")


@dataclass(frozen=True)
class GoldenEntry:
    quantity: str
    args: tuple
    expected: object  # Expr or tuple of Expr (vector components)
    label: str
    dist: tuple | None = None
    spec: ConnectionSpec = field(default_factory=ConnectionSpec)

    def key(self, names) -> str:
        arg = ",".join(names[i] for i in self.args)
        where = f" D={{{','.join(names[i] for i in self.dist)}}}" if self.dist else ""
        return f"{self.quantity}[{self.spec.kind}]({arg}){where}"


@dataclass(frozen=True)
class ScenarioPreset:
    name: str
    manifold: FrameManifold
    distribution: tuple
    connection: ConnectionSpec
    golden: tuple
    anchor: str = ""
    plan: SamplePlan = DEFAULT_PLAN


def _vec(m, comps):
    out = [ZERO] * m
    for i, e in comps.items():
        out[i] = lift(e)
    return tuple(out)


class _Table:
    """Accumulates golden entries for one (distribution, connection) context."""

    def __init__(self, m):
        self.m = m
        self.entries = []

    def add(self, quantity, label, dist, spec, rows):
        for args, value in rows.items():
            if not isinstance(args, tuple):
                args = (args,)
            if isinstance(value, dict):
                value = _vec(self.m, value)
            else:
                value = lift(value)
            self.entries.append(GoldenEntry(quantity, tuple(args), value, label, dist, spec))


def _sphere_golden():
    lc = ConnectionSpec("LC")
    tb = _Table(3)
    d1, d2 = (0, 1), (0, 2)
    ssm1 = ConnectionSpec("SSM", (1, 0, 1))
    ssnm1 = ConnectionSpec("SSNM", (1, 0, 1))
    ssm2 = ConnectionSpec("SSM", (0, 1, 1))
    ssnm2 = ConnectionSpec("SSNM", (0, 1, 1))
    half = Fraction(1, 2)
    tb.add("nabla", "Eq 5.2", None, lc, {
        (0, 1): {2: 1}, (1, 0): {2: -1}, (0, 0): {}, (1, 1): {}, (2, 2): {},
        (0, 2): {1: -1}, (2, 0): {1: 1}, (1, 2): {0: 1}, (2, 1): {0: -1},
    })
    tb.add("nabla_D", "Eq 5.3", d1, lc, {(0, 0): {}, (0, 1): {}, (1, 0): {}, (1, 1): {}})
    tb.add("B", "Eq 5.3", d1, lc, {(0, 0): {}, (1, 1): {}, (0, 1): {2: 1}, (1, 0): {2: -1}})
    tb.add("nabla_D", "Eq 5.5", d1, ssm1, {(0, 0): {}, (0, 1): {}, (1, 0): {0: 1}, (1, 1): {0: -1}})
    tb.add("B", "Eq 5.5", d1, ssm1, {(0, 0): {2: -1}, (0, 1): {2: 1}, (1, 0): {2: -1}, (1, 1): {2: -1}})
    tb.add("H", "Eq 5.5", d1, ssm1, {(): {2: -1}})
    tb.add("A", "Eq 5.6", d1, lc, {(2, 0): {1: 1}, (2, 1): {0: -1}})
    tb.add("A", "Eq 5.6", d1, ssm1, {(2, 0): {1: 1, 0: -1}, (2, 1): {0: -1, 1: -1}})
    tb.add("Lperp", "Eq 5.6", d1, lc, {(0, 2): {}, (1, 2): {}})
    tb.add("R_D", "Eq 5.7", d1, ssm1, {(0, 1, 0): {1: -4}, (0, 1, 1): {0: 4}})
    tb.add("K_D", "Eq 5.7", d1, ssm1, {(0, 1): 4})
    tb.add("tau_D", "Eq 5.7", d1, ssm1, {(): 4})
    tb.add("nabla_D", "Eq 5.9", d1, ssnm1, {(0, 0): {0: 1}, (0, 1): {}, (1, 0): {1: 1}, (1, 1): {}})
    tb.add("B", "Eq 5.9", d1, ssnm1, {(0, 0): {}, (0, 1): {2: 1}, (1, 0): {2: -1}, (1, 1): {}})
    tb.add("R_D", "Eq 5.9", d1, ssnm1, {(0, 1, 0): {1: -5}, (0, 1, 1): {0: 4}})
    tb.add("nabla_D", "Eq 5.10", d2, ssm2, {(0, 0): {2: -1}, (0, 2): {0: 1}, (2, 0): {}, (2, 2): {}})
    tb.add("R_D", "Eq 5.10", d2, ssm2, {(0, 2, 0): {2: 4}, (0, 2, 2): {0: 4}})
    tb.add("K_D", "Eq 5.10", d2, ssm2, {(0, 2): 0})
    tb.add("tau_D", "Eq 5.10", d2, ssm2, {(): 0})
    tb.add("nabla_D", "Eq 5.11", d2, ssnm2, {(0, 0): {}, (0, 2): {0: 1}, (2, 0): {}, (2, 2): {2: 1}})
    tb.add("R_D", "Eq 5.11", d2, ssnm2, {(0, 2, 0): {2: 4}, (0, 2, 2): {0: 5}})
    tb.add("K_D", "Eq 5.11", d2, ssnm2, {(0, 2): half})
    tb.add("tau_D", "Eq 5.11", d2, ssnm2, {(): half})
    return tuple(tb.entries)


def _heisenberg_golden():
    lc = ConnectionSpec("LC")
    tb = _Table(3)
    d = (0, 1)
    h = Fraction(1, 2)
    ssm = ConnectionSpec("SSM", (1, 1, 1))
    ssnm = ConnectionSpec("SSNM", (1, 1, 1))
    tb.add("nabla", "Eq 5.40", None, lc, {
        (0, 0): {}, (1, 1): {}, (2, 2): {}, (0, 1): {2: h}, (1, 0): {2: -h},
        (0, 2): {1: -h}, (2, 0): {1: -h}, (1, 2): {0: h}, (2, 1): {0: h},
    })
    tb.add("nabla_D", "Eq 5.40", d, lc, {(0, 0): {}, (0, 1): {}, (1, 0): {}, (1, 1): {}})
    tb.add("nabla_D", "Eq 5.41", d, ssm, {(0, 0): {1: -1}, (0, 1): {0: 1}, (1, 0): {1: 1}, (1, 1): {0: -1}})
    tb.add("B", "Eq 5.41", d, ssm, {(0, 0): {2: -1}, (1, 1): {2: -1}, (0, 1): {2: h}, (1, 0): {2: -h}})
    tb.add("R_D", "Eq 5.41", d, ssm, {(0, 1, 0): {}, (0, 1, 1): {}})
    tb.add("nabla_D", "Eq 5.42", d, ssnm, {(0, 0): {0: 1}, (0, 1): {0: 1}, (1, 0): {1: 1}, (1, 1): {1: 1}})
    tb.add("R_D", "Eq 5.42", d, ssnm, {(0, 1, 0): {0: 1, 1: -1}, (0, 1, 1): {0: 1, 1: -1}})
    return tuple(tb.entries)


def _warped_common(tb, f, p, q, d, eq, fiber_sq):
    """Tables shared by both warped examples.

    ``fiber_sq`` is the constant of the fiber curvature along D (4 on the sphere,
    0 on the Heisenberg group); ``eq`` maps table names to anchor labels.
    """
    ssm = ConnectionSpec("SSM", (1, 0, 0, 0))
    ssnm = ConnectionSpec("SSNM", (1, 0, 0, 0))
    lc = ConnectionSpec("LC")
    pf = p / f
    k = fiber_sq
    tb.add("nabla_D", eq["nabla_D"], d, lc, {
        (0, 0): {}, (0, 1): {1: pf}, (1, 0): {1: pf}, (0, 2): {2: pf}, (2, 0): {2: pf},
        (1, 1): {0: -f * p}, (2, 2): {0: -f * p}, (1, 2): {}, (2, 1): {},
    })
    tb.add("R_D", eq["R_D"], d, lc, {
        (0, 1, 0): {1: q / f}, (0, 2, 0): {2: q / f}, (0, 1, 1): {0: -f * q}, (0, 1, 2): {}, (0, 2, 1): {},
        (0, 2, 2): {0: -f * q}, (1, 2, 0): {}, (1, 2, 1): {2: p * p - k}, (1, 2, 2): {1: k - p * p},
    })
    tb.add("K_D", eq["K_D"], d, lc, {(0, 1): -q / f, (0, 2): -q / f, (1, 2): (k - p * p) / (f * f)})
    tb.add("Ric_D", eq["Ric_D"], d, lc, {
        (0, 0): 2 * q / f, (1, 1): f * q + p * p - k, (2, 2): f * q + p * p - k,
        (0, 1): 0, (0, 2): 0, (1, 0): 0, (2, 0): 0, (1, 2): 0, (2, 1): 0,
    })
    tb.add("s_D", eq["s_D"], d, lc, {(): 4 * q / f + 2 * p * p / (f * f) - 2 * k / (f * f)})
    # semi-symmetric metric connection, U = d/dt
    tb.add("nabla_D", eq["ssm_nabla_D"], d, ssm, {
        (0, 0): {}, (0, 1): {1: pf}, (1, 0): {1: pf, 0: 1}, (0, 2): {2: pf}, (2, 0): {2: pf, 0: 1},
        (1, 1): {0: -f * p - f * f}, (2, 2): {0: -f * p - f * f}, (1, 2): {}, (2, 1): {},
    })
    tb.add("R_D", eq["ssm_R_D"], d, ssm, {
        (0, 1, 0): {1: q / f}, (0, 2, 0): {2: q / f}, (0, 1, 1): {0: -(f * q + f * p)}, (0, 1, 2): {},
        (0, 2, 1): {}, (0, 2, 2): {0: -(f * q + f * p)}, (1, 2, 0): {1: pf, 2: -pf},
        (1, 2, 1): {2: p * p + f * p - k, 0: f * p + f * f},
        (1, 2, 2): {1: -(p * p + f * p - k), 0: -(f * p + f * f)},
    })
    tb.add("Ric_D", eq["ssm_Ric_D"], d, ssm, {
        (0, 0): 2 * q / f, (1, 1): f * q + 2 * f * p + p * p - k, (2, 2): f * q + 2 * f * p + p * p - k,
        (0, 1): 0, (0, 2): 0, (1, 0): -pf, (2, 0): -pf, (1, 2): 0, (2, 1): 0,
    })
    tb.add("s_D", eq["ssm_s_D"], d, ssm, {(): 4 * q / f + 4 * pf + 2 * p * p / (f * f) - 2 * k / (f * f)})
    # semi-symmetric non-metric connection, U = d/dt
    tb.add("nabla_D", eq["ssnm_nabla_D"], d, ssnm, {
        (0, 0): {0: 1}, (0, 1): {1: pf}, (1, 0): {1: pf, 0: 1}, (0, 2): {2: pf}, (2, 0): {2: pf, 0: 1},
        (1, 1): {0: -f * p}, (2, 2): {0: -f * p}, (1, 2): {}, (2, 1): {},
    })
    tb.add("R_D", eq["ssnm_R_D"], d, ssnm, {
        (0, 1, 0): {1: (q - p) / f}, (0, 2, 0): {2: (q - p) / f}, (0, 1, 1): {0: -(f * q + f * p)},
        (0, 1, 2): {}, (0, 2, 1): {}, (0, 2, 2): {0: -(f * q + f * p)}, (1, 2, 0): {1: pf, 2: -pf},
        (1, 2, 1): {2: p * p - k, 0: f * p}, (1, 2, 2): {1: k - p * p, 0: -f * p},
    })
    tb.add("Ric_D", eq["ssnm_Ric_D"], d, ssnm, {
        (0, 0): 2 * (q - p) / f, (1, 1): f * q + f * p + p * p - k, (2, 2): f * q + f * p + p * p - k,
        (0, 1): 0, (0, 2): 0, (1, 0): -pf, (2, 0): -pf, (1, 2): 0, (2, 1): 0,
    })
    tb.add("s_D", eq["ssnm_s_D"], d, ssnm, {(): 4 * q / f + 2 * p * p / (f * f) - 2 * k / (f * f)})
    return ssm, ssnm, lc


def _warped_sphere_golden(f):
    f = lift(f)
    p = derive(f)
    q = derive(p)
    pf = p / f
    tb = _Table(4)
    lc = ConnectionSpec("LC")
    d = (0, 1, 2)
    fi2 = ONE / (f * f)
    fi3 = ONE / (f * f * f)
    fi4 = fi2 * fi2
    tb.add("nabla", "Eq 5.13", None, lc, {
        (0, 0): {}, (0, 1): {1: pf}, (1, 0): {1: pf}, (0, 2): {2: pf}, (2, 0): {2: pf}, (0, 3): {}, (3, 0): {},
        (1, 1): {0: -f * p}, (2, 2): {0: -f * p}, (1, 2): {3: 1}, (2, 1): {3: -1},
        (1, 3): {2: -fi2}, (3, 1): {2: 2 - fi2}, (2, 3): {1: fi2}, (3, 2): {1: fi2 - 2}, (3, 3): {},
    })
    tb.add("R", "Eq 5.14", None, lc, {
        (0, 1, 0): {1: q / f}, (0, 2, 0): {2: q / f}, (0, 3, 0): {},
        (0, 1, 1): {0: -f * q}, (0, 1, 2): {3: -pf}, (0, 1, 3): {2: fi3 * p},
        (0, 2, 1): {3: pf}, (0, 2, 2): {0: -f * q}, (0, 2, 3): {1: -fi3 * p},
        (0, 3, 1): {2: 2 * fi3 * p}, (0, 3, 2): {1: -2 * fi3 * p}, (0, 3, 3): {},
        (1, 2, 0): {3: 2 * pf}, (1, 3, 0): {2: p * fi3}, (2, 3, 0): {1: -fi3 * p},
        (1, 2, 1): {2: p * p + 3 * fi2 - 4}, (1, 2, 2): {1: -(p * p) - 3 * fi2 + 4}, (1, 2, 3): {0: -2 * pf},
        (1, 3, 1): {3: -fi2}, (1, 3, 2): {0: -pf}, (1, 3, 3): {1: fi4},
        (2, 3, 1): {0: pf}, (2, 3, 2): {3: -fi2}, (2, 3, 3): {2: fi4},
    })
    tb.add("Ric", "Eq 5.15", None, lc, {
        (0, 0): 2 * q / f, (1, 1): f * q + p * p + 2 * fi2 - 4, (2, 2): f * q + p * p + 2 * fi2 - 4,
        (3, 3): -2 * fi4, (0, 1): 0, (0, 2): 0, (0, 3): 0, (1, 2): 0, (1, 3): 0, (2, 3): 0,
    })
    tb.add("s", "Eq 5.16", None, lc, {(): 4 * q / f + 2 * p * p * fi2 - 8 * fi2 - 2 * fi4 + 4})
    tb.add("B", "Eq 5.18", d, lc, {
        (0, 0): {}, (1, 1): {}, (2, 2): {}, (1, 0): {}, (0, 1): {}, (0, 2): {}, (2, 0): {},
        (1, 2): {3: 1}, (2, 1): {3: -1},
    })
    tb.add("A", "Eq 5.18", d, lc, {(3, 0): {}, (3, 1): {2: fi2}, (3, 2): {1: -fi2}})
    tb.add("Lperp", "Eq 5.18", d, lc, {(0, 3): {}, (1, 3): {}, (2, 3): {}})
    eq = {
        "nabla_D": "Eq 5.17", "R_D": "Eq 5.19", "K_D": "Eq 5.20", "Ric_D": "Eq 5.21", "s_D": "Eq 5.24",
        "ssm_nabla_D": "Eq 5.26", "ssm_R_D": "Eq 5.27", "ssm_Ric_D": "Eq 5.29", "ssm_s_D": "Eq 5.30",
        "ssnm_nabla_D": "Eq 5.31", "ssnm_R_D": "Eq 5.32", "ssnm_Ric_D": "Eq 5.33", "ssnm_s_D": "Eq 5.35",
    }
    ssm, ssnm, _ = _warped_common(tb, f, p, q, d, eq, 4)
    tb.add("B", "Eq 5.25", d, ssm, {(1, 2): {3: 1}, (2, 1): {3: -1}, (0, 0): {}, (1, 1): {}})
    tb.add("K_D", "Eq 5.28", d, ssm, {
        (0, 1): -(2 * q + p) / (2 * f), (0, 2): -(2 * q + p) / (2 * f), (1, 2): (4 - f * p - p * p) * fi2,
    })
    tb.add("K_D", "Eq 5.34", d, ssnm, {(0, 1): -q / f, (0, 2): -q / f, (1, 2): (4 - p * p) * fi2})
    return tuple(tb.entries)


def _warped_heisenberg_golden(f):
    f = lift(f)
    p = derive(f)
    q = derive(p)
    pf = p / f
    tb = _Table(4)
    lc = ConnectionSpec("LC")
    d = (0, 1, 2)
    h = Fraction(1, 2)
    fi2 = ONE / (f * f)
    fi3 = ONE / (f * f * f)
    fi4 = fi2 * fi2
    tb.add("nabla", "Eq 5.44", None, lc, {
        (0, 0): {}, (0, 1): {1: pf}, (1, 0): {1: pf}, (0, 2): {2: pf}, (2, 0): {2: pf}, (0, 3): {}, (3, 0): {},
        (1, 1): {0: -f * p}, (2, 2): {0: -f * p}, (1, 2): {3: h}, (2, 1): {3: -h},
        (1, 3): {2: -h * fi2}, (3, 1): {2: -h * fi2}, (2, 3): {1: h * fi2}, (3, 2): {1: h * fi2}, (3, 3): {},
    })
    tb.add("R", "Eq 5.45", None, lc, {
        (0, 1, 0): {1: q / f}, (0, 2, 0): {2: q / f}, (0, 3, 0): {},
        (0, 1, 1): {0: -f * q}, (0, 1, 2): {3: -h * pf}, (0, 1, 3): {2: h * fi3 * p},
        (0, 2, 1): {3: h * pf}, (0, 2, 2): {0: -f * q}, (0, 2, 3): {1: -h * fi3 * p},
        (0, 3, 1): {2: fi3 * p}, (0, 3, 2): {1: -fi3 * p}, (0, 3, 3): {},
        (1, 2, 0): {3: pf}, (1, 3, 0): {2: h * p * fi3}, (2, 3, 0): {1: -h * fi3 * p},
        (1, 2, 1): {2: p * p + Fraction(3, 4) * fi2}, (1, 2, 2): {1: -(p * p + Fraction(3, 4) * fi2)},
        (1, 2, 3): {0: -pf}, (1, 3, 1): {3: -Fraction(1, 4) * fi2}, (1, 3, 2): {0: -h * pf},
        (1, 3, 3): {1: Fraction(1, 4) * fi4}, (2, 3, 1): {0: h * pf}, (2, 3, 2): {3: -Fraction(1, 4) * fi2},
        (2, 3, 3): {2: Fraction(1, 4) * fi4},
    })
    tb.add("Ric", "Eq 5.46", None, lc, {
        (0, 0): 2 * q / f, (1, 1): f * q + p * p + h * fi2, (2, 2): f * q + p * p + h * fi2,
        (3, 3): -h * fi4, (0, 1): 0, (0, 2): 0, (0, 3): 0, (1, 2): 0, (1, 3): 0, (2, 3): 0,
    })
    tb.add("s", "Eq 5.47", None, lc, {(): 4 * q / f + 2 * p * p * fi2 + h * fi4})
    eq = {
        "nabla_D": "Eq 5.48", "R_D": "Eq 5.49", "K_D": "Eq 5.50", "Ric_D": "Eq 5.51", "s_D": "Eq 5.54",
        "ssm_nabla_D": "Eq 5.55", "ssm_R_D": "Eq 5.56", "ssm_Ric_D": "Eq 5.57", "ssm_s_D": "Eq 5.58",
        "ssnm_nabla_D": "Eq 5.59", "ssnm_R_D": "Eq 5.60", "ssnm_Ric_D": "Eq 5.61", "ssnm_s_D": "Eq 5.62",
    }
    _warped_common(tb, f, p, q, d, eq, 0)
    return tuple(tb.entries)


# -- presets ------------------------------------------------------------------------------

PRESET_NAMES = ("sphere3", "heisenberg3", "warped-sphere", "warped-heisenberg")

PRESET_ANCHORS = {
    "sphere3": "Example 1, Eq 5.1",
    "heisenberg3": "Example 3, Eq 5.39",
    "warped-sphere": "Example 2, Eq 5.12",
    "warped-heisenberg": "Example 4, Eq 5.43",
}

WARP_SAMPLES = ("2*t+1", "exp(t)", "(2*t+1)^(2/3)")


def manifold(name: str, f=None, plan: SamplePlan = DEFAULT_PLAN) -> FrameManifold:
    if name == "sphere3":
        return sphere3()
    if name == "heisenberg3":
        return heisenberg3()
    if name == "warped-sphere":
        return warped_sphere(f or "2*t+1", plan)
    if name == "warped-heisenberg":
        return warped_heisenberg(f or "2*t+1", plan)
    raise KeyError(f"unknown preset {name!r}; choose from {', '.join(PRESET_NAMES)}")


def preset(name: str, f=None, plan: SamplePlan = DEFAULT_PLAN) -> ScenarioPreset:
    man = manifold(name, f, plan)
    anchor = PRESET_ANCHORS[name]
    if name == "sphere3":
        return ScenarioPreset(name, man, (0, 1), ConnectionSpec("SSM", (1, 0, 1)), _sphere_golden(), anchor, plan)
    if name == "heisenberg3":
        return ScenarioPreset(name, man, (0, 1), ConnectionSpec("SSM", (1, 1, 1)), _heisenberg_golden(), anchor, plan)
    f = lift(f or "2*t+1")
    golden = _warped_sphere_golden(f) if name == "warped-sphere" else _warped_heisenberg_golden(f)
    return ScenarioPreset(name, man, (0, 1, 2), ConnectionSpec("SSM", (1, 0, 0, 0)), golden, anchor, plan)


# -- golden evaluation ----------------------------------------------------------------------


@dataclass
class GoldenResult:
    key: str
    label: str
    expected: list
    engine: list
    residual: float
    tol: float

    @property
    def match(self) -> bool:
        return self.residual < self.tol

    def as_dict(self):
        return {
            "key": self.key,
            "paper_eq": self.label,
            "paper_value": self.expected,
            "engine_value": self.engine,
            "residual": self.residual,
            "match": self.match,
        }


def _engine_value(frame, entry: GoldenEntry) -> JetArray:
    q, a, spec = entry.quantity, entry.args, entry.spec
    gamma = ambient_connection(frame, spec)
    if entry.dist is not None:
        dist = Distribution(frame, entry.dist)
        geo = DirectGeometry(dist, spec)
    e = frame.basis()
    if q == "nabla":
        return frame.cov(gamma, e[a[0]], e[a[1]])
    if q == "nabla_D":
        return geo.nabla_d(e[a[0]], e[a[1]])
    if q == "B":
        return geo.b(e[a[0]], e[a[1]])
    if q == "A":
        return geo.a(e[a[0]], e[a[1]])
    if q == "Lperp":
        return geo.lperp(e[a[0]], e[a[1]])
    if q == "H":
        return dist.mean_curvature(gamma)
    if q == "R":
        return frame.curvature(gamma, e[a[0]], e[a[1]], e[a[2]])
    if q == "R_D":
        return curvature_d_table(dist, spec)[a[0], a[1], a[2]]
    if q == "K_D":
        return sectional(dist, spec, a[0], a[1])
    if q == "tau_D":
        return scalar_tau(dist, spec)
    if q == "Ric":
        return frame.ricci_table(gamma)[a[0], a[1]]
    if q == "s":
        return frame.scalar_curvature(gamma)
    if q == "Ric_D":
        return ricci_D(dist, spec)[0][a[0], a[1]]
    if q == "s_D":
        return ricci_D(dist, spec)[1]
    raise ValueError(f"unknown golden quantity {q!r}")


def _expected_values(entry, plan):
    exp = entry.expected
    if isinstance(exp, tuple):
        return np.stack([eval_values(e, plan.points) for e in exp])
    return np.asarray(eval_values(exp, plan.points))


def _summarize(values):
    """First sample value of each component, rounded for the ledger."""
    v = np.atleast_2d(values) if np.ndim(values) > 1 else np.asarray(values)[None]
    return [float(np.round(x, 12)) for x in v[:, 0]]


def evaluate_golden(man: FrameManifold, entries, plan: SamplePlan = DEFAULT_PLAN, tol=1e-8):
    frame = man.sample(plan)
    out = []
    for entry in entries:
        engine = _engine_value(frame, entry).values
        expected = _expected_values(entry, plan)
        residual = float(np.max(np.abs(engine - expected)))
        out.append(
            GoldenResult(entry.key(man.names), entry.label, _summarize(expected), _summarize(engine), residual, tol)
        )
    return out


__all__ = [
    "GoldenEntry",
    "GoldenResult",
    "PRESET_ANCHORS",
    "PRESET_NAMES",
    "QUANTITIES",
    "ScenarioPreset",
    "WARP_SAMPLES",
    "ZeroWarp",
    "evaluate_golden",
    "flat_frame",
    "heisenberg3",
    "manifold",
    "preset",
    "sphere3",
    "warped_heisenberg",
    "warped_sphere",
]
