"""Frame-aligned distributions and the objects a connection induces on them.

A :class:`Distribution` is a subset of frame indices (0-based in the Python
API).  Everything here works for any connection given by its coefficient
table ``gamma``; the Levi-Civita connection is the default.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .frame import Frame
from .jets import JetArray, jeinsum


class NotTangent(ValueError):
    """A field expected in D has a component along D-perp."""


class NotNormal(ValueError):
    """A field expected in D-perp has a component along D."""


class InvalidDistribution(ValueError):
    pass


@dataclass(frozen=True)
class PredicateResult:
    holds: bool
    residual: float


class Distribution:
    def __init__(self, frame: Frame, indices: Sequence[int]):
        idx = tuple(sorted(set(int(i) for i in indices)))
        m = frame.m
        if not idx or len(idx) >= m:
            raise InvalidDistribution("a distribution needs a nonempty proper subset of the frame")
        if idx[0] < 0 or idx[-1] >= m:
            raise InvalidDistribution(f"indices {idx} out of range for a {m}-frame")
        self.frame = frame
        self.indices = idx
        self.complement = tuple(i for i in range(m) if i not in idx)
        self.mask = np.zeros(m)
        self.mask[list(idx)] = 1.0
        self.perp_mask = 1.0 - self.mask

    @classmethod
    def from_one_based(cls, frame, indices):
        return cls(frame, [i - 1 for i in indices])

    @property
    def rank(self) -> int:
        return len(self.indices)

    @property
    def tol(self):
        return self.frame.plan.abs_tol

    # -- projections --------------------------------------------------------
    def _masked(self, v: JetArray, mask) -> JetArray:
        return JetArray(v.c * mask[:, None, None])

    def project(self, v: JetArray, side: str = "D") -> JetArray:
        if side == "D":
            return self._masked(v, self.mask)
        if side in ("Dperp", "perp"):
            return self._masked(v, self.perp_mask)
        raise ValueError(f"unknown side {side!r}")

    def tangent(self, v):
        return self._masked(v, self.mask)

    def normal(self, v):
        return self._masked(v, self.perp_mask)

    def require_tangent(self, *fields):
        for v in fields:
            if np.max(np.abs(v.c[..., list(self.complement), :, 0]), initial=0.0) > self.tol:
                raise NotTangent("field has a component along D-perp")

    def require_normal(self, *fields):
        for v in fields:
            if np.max(np.abs(v.c[..., list(self.indices), :, 0]), initial=0.0) > self.tol:
                raise NotNormal("field has a component along D")

    # -- frame batches --------------------------------------------------------
    def basis(self) -> JetArray:
        """(n, m) batch of the D frame fields."""
        return self.frame.basis()[list(self.indices)]

    def perp_basis(self) -> JetArray:
        return self.frame.basis()[list(self.complement)]

    def unit_basis(self) -> JetArray:
        return self.frame.unit_basis()[list(self.indices)]

    def unit_perp_basis(self) -> JetArray:
        return self.frame.unit_basis()[list(self.complement)]

    def pairs(self, first=None, second=None):
        """All (x, y) pairs of the given index lists as two (N, m) batches."""
        first = self.indices if first is None else first
        second = self.indices if second is None else second
        keys = [(i, j) for i in first for j in second]
        eye = self.frame.basis()
        x = eye[[k[0] for k in keys]]
        y = eye[[k[1] for k in keys]]
        return keys, x, y

    # -- integrability -----------------------------------------------------------
    def is_integrable(self):
        """Return ``(integrable, witness)``; the witness is the worst frame pair."""
        c = self.frame.c.values
        worst = (None, 0.0)
        for a in self.indices:
            for b in self.indices:
                if a >= b:
                    continue
                comp = np.max(np.abs(c[a, b][list(self.complement)]), initial=0.0)
                if comp > worst[1]:
                    worst = ((a, b), float(comp))
        if worst[1] > self.tol:
            return False, worst
        return True, None

    # -- induced objects for a connection table -------------------------------------
    def _gamma(self, gamma):
        return self.frame.levi_civita if gamma is None else gamma

    def induced_connection(self, x, y, gamma=None):
        self.require_tangent(x, y)
        return self.tangent(self.frame.cov(self._gamma(gamma), x, y))

    def second_fundamental_form(self, x, y, gamma=None):
        self.require_tangent(x, y)
        return self.normal(self.frame.cov(self._gamma(gamma), x, y))

    def shape_operator(self, xi, gamma=None):
        """``A_xi`` on the D frame and ``L-perp_{E_i} xi``, as two (n, m) batches.

        ``A_xi X = -pi^D nabla_X xi``; for a metric connection this agrees
        with ``g(A_xi X, Y) = g(B(X, Y), xi)``.
        """
        self.require_normal(xi)
        gam = self._gamma(gamma)
        x = self.basis()
        cov = self.frame.cov(gam, x, xi)
        return -self.tangent(cov), self.normal(cov)

    def second_fundamental_table(self, gamma=None) -> JetArray:
        """``B[i, j, :]`` for every frame pair (entries outside D x D are zero)."""
        gam = self._gamma(gamma)
        dd = np.outer(self.mask, self.mask)
        return JetArray(gam.c * dd[:, :, None, None, None] * self.perp_mask[None, None, :, None, None])

    def mean_curvature(self, gamma=None) -> JetArray:
        b = self.second_fundamental_table(gamma)
        diag = jeinsum("iik->ik", b)
        return jeinsum("ik,i->k", diag, self.frame.g.reciprocal()) * (1.0 / self.rank)

    def predicates(self, gamma=None) -> dict:
        frame = self.frame
        b = self.second_fundamental_table(gamma)
        h = (b + b.transpose(1, 0, 2)) * 0.5
        mean = self.mean_curvature(gamma)
        idx = list(self.indices)
        mean_res = mean.max_abs()
        tg_res = (b + b.transpose(1, 0, 2))[idx][:, idx].max_abs()
        eye = np.eye(frame.m)
        hg = jeinsum("ij,i,k->ijk", eye, frame.g, mean)
        umb_res = (h - hg)[idx][:, idx].max_abs()
        tol = self.tol
        return {
            "minimal": PredicateResult(mean_res <= tol, mean_res),
            "totally_geodesic": PredicateResult(tg_res <= tol, tg_res),
            "umbilical": PredicateResult(umb_res <= tol, umb_res),
        }

    # -- frame tables of the induced connection ----------------------------------------
    def induced_table(self, gamma=None) -> JetArray:
        """``gamma^D[i, j, k]`` for i, j, k in D (zeros elsewhere)."""
        gam = self._gamma(gamma)
        m3 = self.mask[:, None, None] * self.mask[None, :, None] * self.mask[None, None, :]
        return JetArray(gam.c * m3[..., None, None])

    def torsion_table(self, gamma=None) -> JetArray:
        """``T^D(E_i, E_j)`` with the D-part of the bracket, on D x D."""
        gd = self.induced_table(gamma)
        cd = JetArray(self.frame.c.c * self.mask[None, None, :, None, None])
        t = gd - gd.transpose(1, 0, 2) - cd
        return t

    def bracket_perp_table(self) -> JetArray:
        """``[E_i, E_j]^{D-perp}`` coefficients for i, j in D."""
        dd = np.outer(self.mask, self.mask)
        return JetArray(self.frame.c.c * dd[:, :, None, None, None] * self.perp_mask[None, None, :, None, None])


def project(dist: Distribution, v: JetArray, side: str = "D") -> JetArray:
    return dist.project(v, side)


def is_integrable(dist: Distribution):
    return dist.is_integrable()


def second_fundamental_form(dist, x, y, gamma=None):
    return dist.second_fundamental_form(x, y, gamma)


def shape_operator(dist, xi, gamma=None):
    return dist.shape_operator(xi, gamma)


def mean_curvature(dist, gamma=None):
    return dist.mean_curvature(gamma)


def predicates(dist, gamma=None):
    return dist.predicates(gamma)


__all__ = [
    "Distribution",
    "InvalidDistribution",
    "NotNormal",
    "NotTangent",
    "PredicateResult",
    "is_integrable",
    "mean_curvature",
    "predicates",
    "project",
    "second_fundamental_form",
    "shape_operator",
]
