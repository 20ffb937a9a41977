"""Ambient connection families and the objects they induce on a distribution.

Two independent evaluators expose the same interface:

* :class:`DirectGeometry` reads everything off the ambient coefficient table of
  the chosen connection (projection of covariant derivatives);
* :class:`ClosedFormGeometry` rebuilds the induced connection, second
  fundamental form, shape operators and normal connection from the
  Levi-Civita objects plus ``U`` or ``K`` using the closed-form relations.

Identity checks compare one against the other, so neither side can hide a
shared mistake.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping, Sequence

import numpy as np

from .distribution import Distribution, NotNormal
from .frame import Frame, scale
from .jets import JetArray, jeinsum
from .scalarfield import ZERO, lift, render

KINDS = ("LC", "SSM", "SSNM", "STAT", "STAT_DUAL")
_ALIASES = {
    "lc": "LC",
    "levi-civita": "LC",
    "ssm": "SSM",
    "ssnm": "SSNM",
    "stat": "STAT",
    "stat_dual": "STAT_DUAL",
    "stat*": "STAT_DUAL",
    "stat-dual": "STAT_DUAL",
}


class AsymmetricCubicForm(ValueError):
    """``C(X, Y, Z) = g(K(X, Y), Z)`` is not fully symmetric."""


def normalize_kind(kind: str) -> str:
    k = _ALIASES.get(str(kind).lower(), str(kind).upper())
    if k not in KINDS:
        raise ValueError(f"unknown connection kind {kind!r}")
    return k


@dataclass(frozen=True, eq=False)
class ConnectionSpec:
    kind: str = "LC"
    U: tuple | None = None
    K: Mapping | None = field(default=None)

    def __post_init__(self):
        object.__setattr__(self, "kind", normalize_kind(self.kind))
        if self.U is not None:
            object.__setattr__(self, "U", tuple(lift(u) for u in self.U))
        if self.K is not None:
            object.__setattr__(self, "K", {tuple(int(x) for x in key): lift(v) for key, v in dict(self.K).items()})
        if self.kind in ("SSM", "SSNM") and self.U is None:
            raise ValueError(f"{self.kind} needs a vector field U")
        if self.kind in ("STAT", "STAT_DUAL") and self.K is None:
            raise ValueError(f"{self.kind} needs a tensor K")

    @property
    def is_statistical(self):
        return self.kind in ("STAT", "STAT_DUAL")

    def dual(self) -> "ConnectionSpec":
        """The g-dual statistical connection (same K, opposite sign)."""
        if not self.is_statistical:
            return self
        return ConnectionSpec("STAT_DUAL" if self.kind == "STAT" else "STAT", None, self.K)

    def with_zero_parameter(self) -> "ConnectionSpec":
        """Same kind with U = 0 or K = 0."""
        if self.kind in ("SSM", "SSNM"):
            return ConnectionSpec(self.kind, tuple(ZERO for _ in self.U), None)
        if self.is_statistical:
            return ConnectionSpec(self.kind, None, {})
        return self

    def describe(self) -> dict:
        out = {"kind": self.kind}
        if self.U is not None:
            out["U"] = [render(u) for u in self.U]
        if self.K is not None:
            out["K"] = {f"{i + 1},{j + 1},{k + 1}": render(e) for (i, j, k), e in sorted(self.K.items())}
        return out


def sample_u(frame: Frame, spec: ConnectionSpec) -> JetArray:
    if spec.U is None:
        return frame.const(np.zeros(frame.m))
    return frame.field(spec.U)


def sample_k(frame: Frame, spec: ConnectionSpec) -> JetArray:
    """``K[i, j, k]``: coefficient of E_k in K(E_i, E_j), sign-adjusted for the dual."""
    m = frame.m
    k = np.zeros((m, m, m, frame.npoints, frame.order + 1))
    for (a, b, c), expr in (spec.K or {}).items():
        k[a, b, c] = frame.scalar(expr).c
    table = JetArray(k)
    return -table if spec.kind == "STAT_DUAL" else table


def cubic_form_asymmetry(frame: Frame, ktab: JetArray) -> float:
    cform = jeinsum("ijk,k->ijk", ktab, frame.g)
    worst = 0.0
    for perm in ((1, 0, 2), (0, 2, 1), (2, 1, 0), (1, 2, 0), (2, 0, 1)):
        worst = max(worst, (cform - cform.transpose(*perm)).max_abs())
    return worst


def ambient_connection(frame: Frame, spec: ConnectionSpec) -> JetArray:
    """Coefficient table of the chosen ambient connection."""
    gamma = frame.levi_civita
    kind = spec.kind
    if kind == "LC":
        return gamma
    eye = np.eye(frame.m)
    if kind in ("SSM", "SSNM"):
        u = sample_u(frame, spec)
        omega = jeinsum("j,j->j", u, frame.g)
        out = gamma + jeinsum("j,ik->ijk", omega, eye)
        if kind == "SSM":
            out = out - jeinsum("ij,i,k->ijk", eye, frame.g, u)
        return out
    ktab = sample_k(frame, spec)
    asym = cubic_form_asymmetry(frame, ktab)
    if asym > frame.plan.abs_tol:
        raise AsymmetricCubicForm(f"C = g(K(.,.),.) is not symmetric (residual {asym:.3e})")
    return gamma + ktab


class InducedGeometry:
    """Common operations over fields; subclasses supply the primitives."""

    def __init__(self, dist: Distribution, spec: ConnectionSpec):
        self.dist = dist
        self.frame = dist.frame
        self.spec = spec
        self.lc = self.frame.levi_civita
        self.u = sample_u(self.frame, spec)
        self.ktab = sample_k(self.frame, spec) if spec.is_statistical else None

    # primitives supplied by subclasses:
    # nabla, nabla_d, b, b_star, a, a_star, lperp, lperp_star

    def omega(self, v):
        return jeinsum("...i,i,i->...", v, self.u, self.frame.g)

    def kfield(self, x, y):
        return jeinsum("...i,...j,ijk->...k", x, y, self.ktab)

    def lc_cov(self, x, y):
        return self.frame.cov(self.lc, x, y)

    def bracket(self, x, y):
        return self.frame.bracket(x, y)

    def inner(self, x, y):
        return self.frame.inner(x, y)

    def curvature_d(self, x, y, z):
        """Distribution curvature from its definition, including the extra bracket term."""
        d = self.dist
        xy = self.bracket(x, y)
        return (
            self.nabla_d(x, self.nabla_d(y, z))
            - self.nabla_d(y, self.nabla_d(x, z))
            - self.nabla_d(d.tangent(xy), z)
            - d.tangent(self.bracket(d.normal(xy), z))
        )

    def ambient_curvature(self, x, y, z):
        return self.nabla(x, self.nabla(y, z)) - self.nabla(y, self.nabla(x, z)) - self.nabla(self.bracket(x, y), z)


class DirectGeometry(InducedGeometry):
    """Induced objects by projecting the ambient connection table."""

    def __init__(self, dist, spec):
        super().__init__(dist, spec)
        self.gamma = ambient_connection(self.frame, spec)
        self.gamma_dual = ambient_connection(self.frame, spec.dual()) if spec.is_statistical else self.gamma

    def nabla(self, x, y):
        return self.frame.cov(self.gamma, x, y)

    def nabla_dual(self, x, y):
        return self.frame.cov(self.gamma_dual, x, y)

    def nabla_d(self, x, y):
        return self.dist.tangent(self.nabla(x, y))

    def b(self, x, y):
        return self.dist.normal(self.nabla(x, y))

    def b_star(self, x, y):
        return self.dist.normal(self.nabla_dual(x, y))

    def a(self, xi, x):
        # A_xi X = -pi^D nabla*_X xi for the statistical pair; otherwise nabla itself
        return -self.dist.tangent(self.nabla_dual(x, xi))

    def a_star(self, xi, x):
        return -self.dist.tangent(self.nabla(x, xi))

    def lperp(self, x, xi):
        return self.dist.normal(self.nabla(x, xi))

    def lperp_star(self, x, xi):
        return self.dist.normal(self.nabla_dual(x, xi))


class ClosedFormGeometry(InducedGeometry):
    """Induced objects rebuilt from Levi-Civita data plus U or K."""

    def nabla(self, x, y):
        base = self.lc_cov(x, y)
        kind = self.spec.kind
        if kind in ("SSM", "SSNM"):
            base = base + scale(self.omega(y), x)
            if kind == "SSM":
                base = base - scale(self.inner(x, y), JetArray(self.u.c))
        elif self.spec.is_statistical:
            base = base + self.kfield(x, y)
        return base

    def nabla_dual(self, x, y):
        if not self.spec.is_statistical:
            return self.nabla(x, y)
        return self.lc_cov(x, y) - self.kfield(x, y)

    def lc_nabla_d(self, x, y):
        return self.dist.tangent(self.lc_cov(x, y))

    def lc_b(self, x, y):
        return self.dist.normal(self.lc_cov(x, y))

    def lc_a(self, xi, x):
        return -self.dist.tangent(self.lc_cov(x, xi))

    def lc_lperp(self, x, xi):
        return self.dist.normal(self.lc_cov(x, xi))

    def nabla_d(self, x, y):
        d = self.dist
        out = self.lc_nabla_d(x, y)
        kind = self.spec.kind
        if kind in ("SSM", "SSNM"):
            out = out + scale(self.omega(y), x)
            if kind == "SSM":
                out = out - scale(self.inner(x, y), d.tangent(self.u))
        elif self.spec.is_statistical:
            out = out + d.tangent(self.kfield(x, y))
        return out

    def b(self, x, y):
        d = self.dist
        out = self.lc_b(x, y)
        if self.spec.kind == "SSM":
            out = out - scale(self.inner(x, y), d.normal(self.u))
        elif self.spec.is_statistical:
            out = out + d.normal(self.kfield(x, y))
        return out

    def b_star(self, x, y):
        if not self.spec.is_statistical:
            return self.b(x, y)
        return self.lc_b(x, y) - self.dist.normal(self.kfield(x, y))

    def a(self, xi, x):
        out = self.lc_a(xi, x)
        if self.spec.kind in ("SSM", "SSNM"):
            out = out - scale(self.omega(xi), x)
        elif self.spec.is_statistical:
            out = out + self.dist.tangent(self.kfield(x, xi))
        return out

    def a_star(self, xi, x):
        if not self.spec.is_statistical:
            return self.a(xi, x)
        return self.lc_a(xi, x) - self.dist.tangent(self.kfield(x, xi))

    def lperp(self, x, xi):
        out = self.lc_lperp(x, xi)
        if self.spec.is_statistical:
            out = out + self.dist.normal(self.kfield(x, xi))
        return out

    def lperp_star(self, x, xi):
        if not self.spec.is_statistical:
            return self.lperp(x, xi)
        return self.lc_lperp(x, xi) - self.dist.normal(self.kfield(x, xi))


# -- public operations ----------------------------------------------------------


def induced_pair(dist: Distribution, spec: ConnectionSpec):
    """Frame tables of the induced connection on D and of its second fundamental form.

    Returns ``(gamma_D, B)`` with ``gamma_D[i, j, k]`` for i, j, k in D and
    ``B[i, j, r]`` for i, j in D, r in D-perp (zeros elsewhere).
    """
    gamma = ambient_connection(dist.frame, spec)
    return dist.induced_table(gamma), dist.second_fundamental_table(gamma)


def weingarten(dist: Distribution, spec: ConnectionSpec, xi: JetArray):
    """Shape operators and normal connections along the D frame.

    Returns a dict of (n, m) batches: ``A`` (and ``A_star`` for the
    statistical pair), ``Lperp`` (and ``Lperp_star``).
    """
    dist.require_normal(xi)
    geo = DirectGeometry(dist, spec)
    x = dist.basis()
    xi_b = JetArray(np.broadcast_to(xi.c, x.c.shape).copy())
    out = {"A": geo.a(xi_b, x), "Lperp": geo.lperp(x, xi_b)}
    if spec.is_statistical:
        out["A_star"] = geo.a_star(xi_b, x)
        out["Lperp_star"] = geo.lperp_star(x, xi_b)
    return out


@dataclass
class CheckResult:
    name: str
    max_residual: float
    tol: float
    label: str = ""
    detail: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return bool(self.max_residual < self.tol)

    def as_dict(self):
        out = {
            "name": self.name,
            "label": self.label,
            "pass": self.passed,
            "max_residual": float(self.max_residual),
            "tol": self.tol,
        }
        out.update(self.detail)
        return out


def verify_characterization(dist: Distribution, spec: ConnectionSpec) -> list:
    """Metricity and torsion of the induced connection against their closed forms."""
    frame = dist.frame
    tol = frame.plan.abs_tol
    gamma = ambient_connection(frame, spec)
    gd = dist.induced_table(gamma)
    idx = list(dist.indices)
    eye = np.eye(frame.m)
    u = sample_u(frame, spec)
    omega = jeinsum("j,j->j", u, frame.g)
    # (nabla^D_{E_i} g^D)(E_j, E_k)
    dg = jeinsum("i,k->ik", frame.w, frame.g.d())
    metricity = (
        jeinsum("jk,ik->ijk", eye, dg) - jeinsum("ijk,k->ijk", gd, frame.g) - jeinsum("ikj,j->ijk", gd, frame.g)
    )
    if spec.kind == "SSNM":
        # -omega(Y) g(X, Z) - omega(Z) g(X, Y)
        expected_metricity = -(jeinsum("j,ik,i->ijk", omega, eye, frame.g) + jeinsum("k,ij,i->ijk", omega, eye, frame.g))
    elif spec.is_statistical:
        # -g(K(X, Y), Z) - g(K(X, Z), Y)
        ktab = sample_k(frame, spec)
        expected_metricity = -(jeinsum("ijk,k->ijk", ktab, frame.g) + jeinsum("ikj,j->ijk", ktab, frame.g))
    else:
        expected_metricity = frame.const(np.zeros((frame.m,) * 3))
    torsion = dist.torsion_table(gamma)
    # -[X, Y]^perp + omega(Y) X - omega(X) Y, projected to D the perp part is dropped
    if spec.kind in ("SSM", "SSNM"):
        expected_torsion = jeinsum("j,ik->ijk", omega, eye) - jeinsum("i,jk->ijk", omega, eye)
    else:
        expected_torsion = frame.const(np.zeros((frame.m,) * 3))
    expected_torsion = JetArray(expected_torsion.c * dist.mask[None, None, :, None, None])
    met_res = (metricity - expected_metricity)[idx][:, idx][:, :, idx].max_abs()
    tor_res = (torsion - expected_torsion)[idx][:, idx][:, :, idx].max_abs()
    # the perp part of the torsion is -[X, Y]^perp by construction of pi^D
    out = [
        CheckResult("metricity", met_res, tol, "induced metricity"),
        CheckResult("torsion", tor_res, tol, "induced torsion"),
    ]
    if spec.is_statistical:
        # X g(Y, Z) = g(nabla^D_X Y, Z) + g(Y, nabla*^D_X Z)
        gd_star = dist.induced_table(ambient_connection(frame, spec.dual()))
        duality = (
            jeinsum("jk,ik->ijk", eye, dg) - jeinsum("ijk,k->ijk", gd, frame.g) - jeinsum("ikj,j->ijk", gd_star, frame.g)
        )
        out.append(CheckResult("duality", duality[idx][:, idx][:, :, idx].max_abs(), tol, "induced duality"))
    return out


__all__ = [
    "AsymmetricCubicForm",
    "CheckResult",
    "ClosedFormGeometry",
    "ConnectionSpec",
    "DirectGeometry",
    "InducedGeometry",
    "KINDS",
    "NotNormal",
    "ambient_connection",
    "cubic_form_asymmetry",
    "induced_pair",
    "normalize_kind",
    "sample_k",
    "sample_u",
    "verify_characterization",
    "weingarten",
]
