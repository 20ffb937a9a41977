"""Curvature of a distribution and the Gauss, Codazzi and Ricci equations.

Left-hand sides of the structure equations come from the ambient curvature
table of the chosen connection.  Right-hand sides are assembled from
:class:`~distgeo.connections.ClosedFormGeometry`, which only knows the
Levi-Civita connection and ``U`` or ``K``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .connections import (
    ClosedFormGeometry,
    ConnectionSpec,
    DirectGeometry,
    ambient_connection,
)
from .distribution import Distribution
from .frame import scale
from .jets import JetArray, jeinsum


class SamePlane(ValueError):
    """A plane needs two distinct directions."""


@dataclass
class CurvatureReport:
    identity: str
    keys: list
    grid: np.ndarray  # (tuples, points) worst component residual
    tol: float
    label: str = ""
    extra: dict = field(default_factory=dict)

    @property
    def max_residual(self) -> float:
        return float(np.max(self.grid)) if self.grid.size else 0.0

    @property
    def passed(self) -> bool:
        return self.max_residual < self.tol

    def worst(self):
        if not self.grid.size:
            return None
        t, p = np.unravel_index(int(np.argmax(self.grid)), self.grid.shape)
        return self.keys[t], int(p)

    def as_dict(self):
        return {
            "name": self.identity,
            "label": self.label,
            "pass": bool(self.passed),
            "max_residual": self.max_residual,
            "mean_residual": float(np.mean(self.grid)) if self.grid.size else 0.0,
            "tuples": len(self.keys),
            "tol": self.tol,
        }


def _gamma(dist, spec):
    return ambient_connection(dist.frame, spec)


# -- frame tables --------------------------------------------------------------------


def curvature_d_table(dist: Distribution, spec: ConnectionSpec | None = None, gamma=None) -> JetArray:
    """``R^D[a, b, c, l]`` for a, b, c, l in D (zeros elsewhere)."""
    frame = dist.frame
    gam = _gamma(dist, spec) if gamma is None else gamma
    gd = dist.induced_table(gam)
    c = frame.c
    cd = JetArray(c.c * dist.mask[None, None, :, None, None])
    cp = JetArray(c.c * dist.perp_mask[None, None, :, None, None])
    dgd = gd.d()
    r = (
        jeinsum("a,bcl->abcl", frame.w, dgd)
        - jeinsum("b,acl->abcl", frame.w, dgd)
        + jeinsum("bck,akl->abcl", gd, gd)
        - jeinsum("ack,bkl->abcl", gd, gd)
        - jeinsum("abk,kcl->abcl", cd, gd)
        - jeinsum("abr,rcl->abcl", cp, c)
    )
    mk = dist.mask
    m4 = mk[:, None, None, None] * mk[None, :, None, None] * mk[None, None, :, None] * mk[None, None, None, :]
    return JetArray(r.c * m4[..., None, None])


def curvature_D(dist: Distribution, spec: ConnectionSpec, x, y, z) -> JetArray:
    """``R^D(x, y) z`` from the definition with the induced connection of ``spec``."""
    dist.require_tangent(x, y, z)
    return DirectGeometry(dist, spec).curvature_d(x, y, z)


def sectional(dist: Distribution, spec: ConnectionSpec, i: int, j: int, table=None) -> JetArray:
    """Symmetrized sectional curvature of the plane spanned by frame fields i, j."""
    if i == j:
        raise SamePlane(f"plane needs two distinct indices, got {i} twice")
    if i not in dist.indices or j not in dist.indices:
        raise ValueError("plane must lie in the distribution")
    r = curvature_d_table(dist, spec) if table is None else table
    g = dist.frame.g
    num = r[i, j, j, i] * g[i] - r[i, j, i, j] * g[j]
    return num / (g[i] * g[j]) * 0.5


def sectional_plane(dist: Distribution, spec: ConnectionSpec, a, b, table=None) -> JetArray:
    """Sectional curvature of the plane spanned by two orthonormal constant
    combinations ``a``, ``b`` (length-n coefficient vectors over the unit D frame)."""
    r = curvature_d_table(dist, spec) if table is None else table
    frame = dist.frame
    idx = list(dist.indices)
    r4 = frame.lower(r)
    s = frame.inv_sqrt_g
    ea = np.zeros(frame.m)
    eb = np.zeros(frame.m)
    ea[idx] = a
    eb[idx] = b
    u1 = JetArray(ea[:, None, None] * s.c)
    u2 = JetArray(eb[:, None, None] * s.c)
    first = jeinsum("abcd,a,b,c,d->", r4, u1, u2, u2, u1)
    second = jeinsum("abcd,a,b,c,d->", r4, u1, u2, u1, u2)
    return (first - second) * 0.5


def scalar_tau(dist: Distribution, spec: ConnectionSpec, table=None) -> JetArray:
    r = curvature_d_table(dist, spec) if table is None else table
    return jeinsum("ijji,j->", r, dist.frame.g.reciprocal()) * 0.5


def ricci_D(dist: Distribution, spec: ConnectionSpec, table=None):
    """Ricci table of D in the unnormalized frame and its scalar ``s^D``.

    ``Ric^D[a, b] = sum_{k in D} g(R^D(E_a, E~_k) E_b, E~_k)``.
    """
    r = curvature_d_table(dist, spec) if table is None else table
    ric = jeinsum("akbk->ab", r)
    s = jeinsum("aa,a->", ric, dist.frame.g.reciprocal())
    return ric, s


def ricci_orthonormal(dist, spec, table=None) -> JetArray:
    ric, _ = ricci_D(dist, spec, table)
    s = dist.frame.inv_sqrt_g
    return jeinsum("ab,a,b->ab", ric, s, s)


def is_mixed_ricci_flat(dist: Distribution, spec: ConnectionSpec, table=None):
    """Return ``(flat, worst_residual, ricci_table)``; both argument orders are checked."""
    ric, _ = ricci_D(dist, spec, table)
    idx = list(dist.indices)
    vals = ric.values
    worst = 0.0
    for a in idx:
        for b in idx:
            if a != b:
                worst = max(worst, float(np.max(np.abs(vals[a, b]))))
    return worst <= dist.tol, worst, ric


def tensoriality_residual(dist: Distribution, spec: ConnectionSpec, phi="1+t^2") -> float:
    """Worst ``|R^D(phi X, Y) Z - phi R^D(X, Y) Z|`` over D frame triples."""
    frame = dist.frame
    geo = DirectGeometry(dist, spec)
    ph = frame.scalar(phi)
    keys, x, y, z = _triples(dist)
    n = len(keys)
    phb = JetArray(np.broadcast_to(ph.c, (n,) + ph.c.shape).copy())
    lhs = geo.curvature_d(scale(phb, x), y, z)
    rhs = scale(phb, geo.curvature_d(x, y, z))
    return (lhs - rhs).max_abs()


def rotation_residual(dist: Distribution, spec: ConnectionSpec, i, j, angles=(np.pi / 6, np.pi / 3)) -> float:
    """Change of the sectional curvature when the frame pair (i, j) is rotated."""
    idx = list(dist.indices)
    n = len(idx)
    pi, pj = idx.index(i), idx.index(j)
    table = curvature_d_table(dist, spec)
    base = sectional(dist, spec, i, j, table)
    worst = 0.0
    for th in angles:
        a = np.zeros(n)
        b = np.zeros(n)
        a[pi], a[pj] = np.cos(th), np.sin(th)
        b[pi], b[pj] = -np.sin(th), np.cos(th)
        worst = max(worst, (sectional_plane(dist, spec, a, b, table) - base).max_abs())
    return worst


# -- tuple batches ----------------------------------------------------------------------


def _batch(frame, keys, pos):
    eye = frame.basis()
    return eye[[k[pos] for k in keys]]


def _triples(dist):
    d = dist.indices
    keys = [(a, b, c) for a in d for b in d for c in d]
    f = dist.frame
    return keys, _batch(f, keys, 0), _batch(f, keys, 1), _batch(f, keys, 2)


def _residual_grid(diff: JetArray) -> np.ndarray:
    v = np.abs(diff.values)
    if v.ndim == 3:  # (N, m, P)
        v = v.max(axis=1)
    return v


# -- structure equations ------------------------------------------------------------------


def gauss_sides(dist: Distribution, spec: ConnectionSpec):
    frame = dist.frame
    d = dist.indices
    keys = [(a, b, c, e) for a in d for b in d for c in d for e in d]
    x, y, z, w = (_batch(frame, keys, p) for p in range(4))
    r4 = frame.lower(frame.curvature_table(_gamma(dist, spec)))
    ia = [np.array([k[p] for k in keys]) for p in range(4)]
    lhs = JetArray(r4.c[ia[0], ia[1], ia[2], ia[3]])

    cf = ClosedFormGeometry(dist, spec)
    g = cf.inner
    rd = g(cf.curvature_d(x, y, z), w)
    xy = cf.bracket(x, y)
    kind = spec.kind
    if spec.is_statistical:
        rhs = (
            rd
            + g(cf.b_star(y, w), cf.b(x, z))
            - g(cf.b_star(x, w), cf.b(y, z))
            + g(cf.b_star(z, w), xy)
        )
    else:
        b = cf.lc_b
        bxw, byz, byw, bxz, bzw = b(x, w), b(y, z), b(y, w), b(x, z), b(z, w)
        rhs = rd - g(bxw, byz) + g(byw, bxz) + g(bzw, xy)
        if kind in ("SSM", "SSNM"):
            om = cf.omega
            rhs = rhs + g(x, w) * om(byz) - g(y, w) * om(bxz)
        if kind == "SSM":
            om = cf.omega
            u_perp = om(dist.normal(cf.u))
            rhs = (
                rhs
                + g(y, z) * om(bxw)
                - g(x, z) * om(byw)
                - g(y, z) * g(x, w) * u_perp
                + g(x, z) * g(y, w) * u_perp
            )
    return keys, lhs, rhs


def verify_gauss(dist: Distribution, spec: ConnectionSpec) -> CurvatureReport:
    keys, lhs, rhs = gauss_sides(dist, spec)
    return CurvatureReport(f"gauss/{spec.kind}", keys, _residual_grid(lhs - rhs), dist.tol, "Gauss equation")


def codazzi_sides(dist: Distribution, spec: ConnectionSpec):
    frame = dist.frame
    keys, x, y, z = _triples(dist)
    r = frame.curvature_table(_gamma(dist, spec))
    ia = [np.array([k[p] for k in keys]) for p in range(3)]
    lhs = dist.normal(JetArray(r.c[ia[0], ia[1], ia[2]]))

    cf = ClosedFormGeometry(dist, spec)
    xy = cf.bracket(x, y)
    xi = dist.normal(xy)
    xy_d = dist.tangent(xy)
    b, nd, lp = cf.b, cf.nabla_d, cf.lperp
    if spec.is_statistical:
        rhs = (
            -dist.normal(cf.bracket(xi, z))
            + b(x, nd(y, z))
            - b(y, nd(x, z))
            - b(xy_d, z)
            + lp(x, b(y, z))
            - lp(y, b(x, z))
            - lp(z, xi)
        )
    else:

        def cov_b(u, v, w):
            return lp(u, b(v, w)) - b(nd(u, v), w) - b(v, nd(u, w))

        rhs = cov_b(x, y, z) - cov_b(y, x, z) - dist.normal(cf.bracket(xi, z)) - lp(z, xi)
        if spec.kind in ("SSM", "SSNM"):
            om = cf.omega
            rhs = rhs - scale(om(x), b(y, z)) + scale(om(y), b(x, z)) - scale(om(z), xi)
    return keys, lhs, rhs


def verify_codazzi(dist: Distribution, spec: ConnectionSpec) -> CurvatureReport:
    keys, lhs, rhs = codazzi_sides(dist, spec)
    return CurvatureReport(f"codazzi/{spec.kind}", keys, _residual_grid(lhs - rhs), dist.tol, "Codazzi equation")


def ricci_eq_sides(dist: Distribution, spec: ConnectionSpec):
    frame = dist.frame
    d, p = dist.indices, dist.complement
    r = frame.curvature_table(_gamma(dist, spec))
    cf = ClosedFormGeometry(dist, spec)
    lp, b = cf.lperp, cf.b
    if spec.is_statistical:
        keys = [(a, bb, s, q) for a in d for bb in d for s in p for q in p]
        x, y, xi, eta = (_batch(frame, keys, k) for k in range(4))
        r4 = frame.lower(r)
        ia = [np.array([k[j] for k in keys]) for j in range(4)]
        lhs = JetArray(r4.c[ia[0], ia[1], ia[2], ia[3]])
        g = cf.inner
        xy = cf.bracket(x, y)
        rl = (
            lp(x, lp(y, xi))
            - lp(y, lp(x, xi))
            - lp(dist.tangent(xy), xi)
            - dist.normal(cf.nabla(dist.normal(xy), xi))
        )
        rhs = g(cf.a(eta, y), cf.a_star(xi, x)) - g(cf.a(eta, x), cf.a_star(xi, y)) + g(rl, eta)
        return keys, lhs, rhs
    keys = [(a, bb, s) for a in d for bb in d for s in p]
    x, y, xi = (_batch(frame, keys, k) for k in range(3))
    ia = [np.array([k[j] for k in keys]) for j in range(3)]
    lhs = dist.normal(JetArray(r.c[ia[0], ia[1], ia[2]]))
    xy = cf.bracket(x, y)
    rl = (
        lp(x, lp(y, xi))
        - lp(y, lp(x, xi))
        - lp(dist.tangent(xy), xi)
        - dist.normal(cf.nabla(dist.normal(xy), xi))
    )
    rhs = -b(x, cf.a(xi, y)) + b(y, cf.a(xi, x)) + rl
    return keys, lhs, rhs


def verify_ricci_eq(dist: Distribution, spec: ConnectionSpec) -> CurvatureReport:
    keys, lhs, rhs = ricci_eq_sides(dist, spec)
    return CurvatureReport(f"ricci/{spec.kind}", keys, _residual_grid(lhs - rhs), dist.tol, "Ricci equation")


def verify_curvature_paths(dist: Distribution, spec: ConnectionSpec) -> CurvatureReport:
    """Frame-table R^D against the definitional evaluation on all D triples."""
    keys, x, y, z = _triples(dist)
    table = curvature_d_table(dist, spec)
    ia = [np.array([k[p] for k in keys]) for p in range(3)]
    lhs = JetArray(table.c[ia[0], ia[1], ia[2]])
    rhs = DirectGeometry(dist, spec).curvature_d(x, y, z)
    return CurvatureReport(f"curvature_paths/{spec.kind}", keys, _residual_grid(lhs - rhs), dist.tol, "R^D two paths")


__all__ = [
    "CurvatureReport",
    "SamePlane",
    "curvature_D",
    "curvature_d_table",
    "is_mixed_ricci_flat",
    "ricci_D",
    "ricci_orthonormal",
    "rotation_residual",
    "scalar_tau",
    "sectional",
    "sectional_plane",
    "tensoriality_residual",
    "verify_codazzi",
    "verify_curvature_paths",
    "verify_gauss",
    "verify_ricci_eq",
]
