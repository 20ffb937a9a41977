"""Riemannian manifolds described by a g-orthogonal frame.

A :class:`FrameManifold` is symbolic input: diagonal metric coefficients,
structure functions of the bracket and derivation weights, all as scalar
expressions in ``t``.  :meth:`FrameManifold.sample` turns it into a
:class:`Frame`, which holds jets of every coefficient at the plan points and
implements the field calculus (brackets, covariant derivatives, curvature).

Index conventions used throughout the package:

* ``c[i, j, k]`` is the coefficient of ``E_k`` in ``[E_i, E_j]``;
* ``gamma[i, j, k]`` is the coefficient of ``E_k`` in ``nabla_{E_i} E_j``;
* ``R[a, b, c, l]`` is the coefficient of ``E_l`` in ``R(E_a, E_b) E_c``.

Vector fields are jet arrays whose last tensor axis has length ``m``; any
leading axes are batch axes that are processed in lockstep.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping, Sequence

import numpy as np

from .jets import JetArray, jeinsum
from .scalarfield import (
    DEFAULT_PLAN,
    JET_ORDER,
    ZERO,
    Expr,
    SamplePlan,
    evaluate,
    lift,
    render,
)


class SingularMetric(ArithmeticError):
    """A metric coefficient vanishes (or is negative) at a sample point."""


class InvalidFrame(ValueError):
    """The frame data violates antisymmetry, Jacobi or derivation compatibility."""


def scale(s: JetArray, v: JetArray) -> JetArray:
    """Multiply a batch of scalars ``(...)`` into a batch of fields ``(..., m)``."""
    return JetArray(s.c[..., None, :, :]) * v


@dataclass(frozen=True, eq=False)
class FrameManifold:
    names: tuple
    metric: tuple
    structure: Mapping = field(default_factory=dict)
    weights: tuple = ()
    label: str = ""

    def __post_init__(self):
        m = len(self.names)
        object.__setattr__(self, "names", tuple(self.names))
        object.__setattr__(self, "metric", tuple(lift(g) for g in self.metric))
        weights = tuple(lift(w) for w in self.weights) if self.weights else (ZERO,) * m
        object.__setattr__(self, "weights", weights)
        struct = {}
        for (i, j, k), expr in dict(self.structure).items():
            struct[(int(i), int(j), int(k))] = lift(expr)
        object.__setattr__(self, "structure", struct)
        if len(self.metric) != m or len(self.weights) != m:
            raise InvalidFrame("names, metric and weights must have the same length")
        for (i, j, k) in struct:
            if not all(0 <= x < m for x in (i, j, k)):
                raise InvalidFrame(f"structure index {(i, j, k)} out of range")

    @classmethod
    def from_brackets(cls, names, metric, brackets, weights=None, label=""):
        """Build from ``{(i, j): {k: expr}}`` given for ``i < j``; antisymmetrized here."""
        struct = {}
        for (i, j), terms in brackets.items():
            if i == j:
                raise InvalidFrame("bracket of a field with itself must vanish")
            for k, expr in terms.items():
                e = lift(expr)
                struct[(i, j, k)] = e
                struct[(j, i, k)] = -e
        return cls(tuple(names), tuple(metric), struct, tuple(weights) if weights else (), label)

    @property
    def m(self) -> int:
        return len(self.names)

    def c(self, i, j, k) -> Expr:
        return self.structure.get((i, j, k), ZERO)

    def sample(self, plan: SamplePlan = DEFAULT_PLAN, order: int = JET_ORDER) -> "Frame":
        return Frame(self, plan, order)

    def check_invariants(self, plan: SamplePlan = DEFAULT_PLAN) -> dict:
        """Worst residuals of antisymmetry, Jacobi and derivation compatibility."""
        return self.sample(plan).invariant_residuals()

    def describe(self) -> dict:
        return {
            "names": list(self.names),
            "metric": [render(g) for g in self.metric],
            "weights": [render(w) for w in self.weights],
            "structure": {
                f"{i + 1},{j + 1},{k + 1}": render(e) for (i, j, k), e in sorted(self.structure.items())
            },
        }


def _stack_exprs(exprs, plan, order):
    return JetArray.stack([evaluate(e, plan.points, order) for e in exprs])


class Frame:
    """A frame manifold sampled as jets at the points of a plan."""

    def __init__(self, manifold: FrameManifold, plan: SamplePlan = DEFAULT_PLAN, order: int = JET_ORDER):
        self.manifold = manifold
        self.plan = plan
        m = manifold.m
        self.m = m
        self.order = order
        self.g = _stack_exprs(manifold.metric, plan, order)
        gv = self.g.values
        bad = np.abs(gv) <= plan.abs_tol
        if np.any(bad) or np.any(gv < 0):
            i, p = np.argwhere(bad | (gv < 0))[0]
            raise SingularMetric(
                f"metric coefficient g_{i + 1} = {render(manifold.metric[i])} is not positive at t={plan.points[p]}"
            )
        self.w = _stack_exprs(manifold.weights, plan, order)
        c = np.zeros((m, m, m, len(plan.points), order + 1))
        for (i, j, k), expr in manifold.structure.items():
            c[i, j, k] = evaluate(expr, plan.points, order).c
        self.c = JetArray(c)

    # -- constructors for fields and scalars ---------------------------------
    @property
    def npoints(self):
        return len(self.plan.points)

    def const(self, values) -> JetArray:
        return JetArray.constant(values, self.npoints, self.order)

    def scalar(self, expr) -> JetArray:
        return evaluate(lift(expr), self.plan.points, self.order)

    def field(self, coeffs: Sequence) -> JetArray:
        """A vector field from ``m`` coefficients (expressions, strings or numbers)."""
        if len(coeffs) != self.m:
            raise ValueError(f"expected {self.m} coefficients, got {len(coeffs)}")
        return JetArray.stack([self.scalar(c) for c in coeffs])

    def basis(self, i=None) -> JetArray:
        eye = np.eye(self.m)
        return self.const(eye if i is None else eye[i])

    @cached_property
    def inv_sqrt_g(self) -> JetArray:
        return self.g.power(-0.5)

    def unit_basis(self) -> JetArray:
        """Orthonormalized frame E_i / sqrt(g_i) as an (m, m) field batch."""
        return JetArray(np.eye(self.m)[:, :, None, None] * self.inv_sqrt_g.c[:, None, :, :])

    # -- field calculus -----------------------------------------------------
    def direction(self, x: JetArray) -> JetArray:
        """The weight ``x(t)`` so that ``x(phi) = direction(x) * phi'``."""
        return jeinsum("...i,i->...", x, self.w)

    def apply(self, x: JetArray, phi: JetArray) -> JetArray:
        """Directional derivative ``x(phi)`` of a scalar batch."""
        return self.direction(x) * phi.d()

    def apply_to_field(self, x: JetArray, v: JetArray) -> JetArray:
        """Componentwise ``x(v^k)``."""
        return scale(self.direction(x), v.d())

    def inner(self, x: JetArray, y: JetArray) -> JetArray:
        return jeinsum("...i,...i,i->...", x, y, self.g)

    def norm_sq(self, x: JetArray) -> JetArray:
        return self.inner(x, x)

    def bracket(self, x: JetArray, y: JetArray) -> JetArray:
        return (
            self.apply_to_field(x, y)
            - self.apply_to_field(y, x)
            + jeinsum("...i,...j,ijk->...k", x, y, self.c)
        )

    def cov(self, gamma: JetArray, x: JetArray, y: JetArray) -> JetArray:
        """``nabla_x y`` for the connection with coefficients ``gamma``."""
        return self.apply_to_field(x, y) + jeinsum("...i,...j,ijk->...k", x, y, gamma)

    def curvature(self, gamma: JetArray, x, y, z) -> JetArray:
        """``R(x, y) z`` straight from the definition."""
        return (
            self.cov(gamma, x, self.cov(gamma, y, z))
            - self.cov(gamma, y, self.cov(gamma, x, z))
            - self.cov(gamma, self.bracket(x, y), z)
        )

    # -- frame tables ---------------------------------------------------------
    @cached_property
    def levi_civita(self) -> JetArray:
        """Koszul formula on frame triples, solved with the diagonal metric."""
        g, c, w = self.g, self.c, self.w
        eye = np.eye(self.m)
        dg = jeinsum("i,k->ik", w, g.d())  # E_i(g_k)
        num = (
            jeinsum("jk,ik->ijk", eye, dg)
            + jeinsum("ik,jk->ijk", eye, dg)
            - jeinsum("ij,ki->ijk", eye, dg)
            + jeinsum("ijk,k->ijk", c, g)
            - jeinsum("ikj,j->ijk", c, g)
            - jeinsum("jki,i->ijk", c, g)
        )
        return jeinsum("ijk,k->ijk", num, (g * 2.0).reciprocal())

    def connection(self, gamma=None) -> "ConnectionTable":
        return ConnectionTable(self, self.levi_civita if gamma is None else gamma)

    def curvature_table(self, gamma: JetArray) -> JetArray:
        dgam = gamma.d()
        return (
            jeinsum("a,bcl->abcl", self.w, dgam)
            - jeinsum("b,acl->abcl", self.w, dgam)
            + jeinsum("bck,akl->abcl", gamma, gamma)
            - jeinsum("ack,bkl->abcl", gamma, gamma)
            - jeinsum("abk,kcl->abcl", self.c, gamma)
        )

    def lower(self, table: JetArray) -> JetArray:
        """Lower the last index with the metric: ``T[..., l] g_l``."""
        return jeinsum("...l,l->...l", table, self.g)

    def ricci_table(self, gamma: JetArray) -> JetArray:
        """``Ric[i, j] = sum_k g(R(E_i, E~_k) E_j, E~_k)`` in the unnormalized frame."""
        r = self.curvature_table(gamma)
        return jeinsum("ikjk->ij", r)

    def scalar_curvature(self, gamma: JetArray) -> JetArray:
        ric = self.ricci_table(gamma)
        return jeinsum("ii,i->", ric, self.g.reciprocal())

    def sectional_table(self, gamma: JetArray) -> JetArray:
        """Symmetrized sectional curvature of every frame plane (orthonormalized)."""
        r4 = self.lower(self.curvature_table(gamma))
        ginv = self.g.reciprocal()
        sym = jeinsum("ijji->ij", r4) - jeinsum("ijij->ij", r4)
        return jeinsum("ij,i,j->ij", sym, ginv, ginv) * 0.5

    def torsion_table(self, gamma: JetArray) -> JetArray:
        return gamma - gamma.transpose(1, 0, 2) - self.c

    def metricity_table(self, gamma: JetArray) -> JetArray:
        """``(nabla_{E_i} g)(E_j, E_k)`` for every frame triple."""
        eye = np.eye(self.m)
        dg = jeinsum("i,k->ik", self.w, self.g.d())
        return (
            jeinsum("jk,ik->ijk", eye, dg)
            - jeinsum("ijk,k->ijk", gamma, self.g)
            - jeinsum("ikj,j->ijk", gamma, self.g)
        )

    # -- invariants -------------------------------------------------------------
    def invariant_residuals(self) -> dict:
        c = self.c
        antisym = (c + c.transpose(1, 0, 2)).max_abs()
        # sum over cyclic (i, j, k) of  c_ij^l c_lk^p - E_k(c_ij^p)
        quad = jeinsum("ijl,lkp->ijkp", c, c)
        deriv = jeinsum("k,ijp->ijkp", self.w, c.d())
        term = quad - deriv
        jacobi = term + term.transpose(1, 2, 0, 3) + term.transpose(2, 0, 1, 3)
        w = self.w
        lhs = jeinsum("i,j->ij", w, w.d()) - jeinsum("j,i->ij", w, w.d())
        rhs = jeinsum("ijk,k->ij", c, w)
        return {
            "antisymmetry": antisym,
            "jacobi": jacobi.max_abs(),
            "derivation": (lhs - rhs).max_abs(),
            "min_metric": float(np.min(self.g.values)),
        }

    def validate(self, tol=None):
        tol = self.plan.abs_tol if tol is None else tol
        res = self.invariant_residuals()
        for key in ("antisymmetry", "jacobi", "derivation"):
            if res[key] > tol:
                raise InvalidFrame(f"{key} residual {res[key]:.3e} exceeds {tol:.1e}")
        return res


class ConnectionTable:
    """Connection coefficients on a sampled frame."""

    def __init__(self, frame: Frame, gamma: JetArray):
        self.frame = frame
        self.gamma = gamma

    def __call__(self, x, y):
        return self.frame.cov(self.gamma, x, y)

    def curvature(self, x, y, z):
        return self.frame.curvature(self.gamma, x, y, z)

    @cached_property
    def riemann(self):
        return self.frame.curvature_table(self.gamma)

    def ricci(self):
        return self.frame.ricci_table(self.gamma)

    def scalar(self):
        return self.frame.scalar_curvature(self.gamma)

    def torsion_residual(self) -> float:
        return self.frame.torsion_table(self.gamma).max_abs()

    def metricity_residual(self) -> float:
        return self.frame.metricity_table(self.gamma).max_abs()


def koszul_levi_civita(manifold: FrameManifold, plan: SamplePlan = DEFAULT_PLAN) -> ConnectionTable:
    return manifold.sample(plan).connection()


def bracket_general(frame: Frame, v: JetArray, w: JetArray) -> JetArray:
    return frame.bracket(v, w)


def ricci_ambient(frame: Frame, gamma: JetArray | None = None) -> JetArray:
    return frame.ricci_table(frame.levi_civita if gamma is None else gamma)


def scalar_ambient(frame: Frame, gamma: JetArray | None = None) -> JetArray:
    return frame.scalar_curvature(frame.levi_civita if gamma is None else gamma)


__all__ = [
    "ConnectionTable",
    "Frame",
    "FrameManifold",
    "InvalidFrame",
    "SingularMetric",
    "bracket_general",
    "koszul_levi_civita",
    "ricci_ambient",
    "scalar_ambient",
    "scale",
]
