"""Chen first and Chen-Ricci inequalities for semi-symmetric connections.

Every quantity is evaluated pointwise over an orthonormal D frame
``E'_i = sum_a Q[i, a] E~_a`` built from a constant orthogonal matrix ``Q``
over the unit D frame ``E~_a = E_a / sqrt(g_a)``.  The plane of the first
inequality is span(E'_1, E'_2); the direction of the Ricci inequality is E'_1.

Two routes produce each right-hand side:

* the named quantities (lambda, A^D, Omega, norms of B and H) evaluated
  with field operations on the closed-form geometry;
* raw summation over coefficient arrays ``h^r_ij`` read off the ambient
  connection tables.

The left-hand side comes from the definitional curvature of D for the
ambient connection table.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .connections import ClosedFormGeometry, ConnectionSpec, DirectGeometry, ambient_connection
from .distribution import Distribution
from .jets import JetArray, jeinsum

SPACE_FORM_TOL = 1e-8
KINDS = ("SSM", "SSNM")


class DimensionTooSmall(ValueError):
    pass


class NotConstantCurvature(ValueError):
    """The ambient Levi-Civita curvature is not that of a space form of curvature c."""


class NotUnit(ValueError):
    pass


# -- hypotheses -------------------------------------------------------------------


def space_form_residual(frame, c: float) -> float:
    """Max deviation of ``R(E_a, E_b, E_c, E_d)`` from ``c (g_ad g_bc - g_ac g_bd)``."""
    r4 = frame.lower(frame.curvature_table(frame.levi_civita)).values
    g = frame.g.values
    eye = np.eye(frame.m)
    gg = np.einsum("ad,aP->adP", eye, g)
    model = c * (np.einsum("adP,bcP->abcdP", gg, gg) - np.einsum("acP,bdP->abcdP", gg, gg))
    return float(np.max(np.abs(r4 - model)))


def sectional_sweep(frame) -> np.ndarray:
    """Sectional curvature of every frame plane at every sample point, shape (pairs, P)."""
    k = frame.sectional_table(frame.levi_civita).values
    m = frame.m
    return np.array([k[i, j] for i in range(m) for j in range(i + 1, m)])


def require_space_form(frame, c, tol=SPACE_FORM_TOL) -> float:
    if c is None:
        raise NotConstantCurvature("no constant curvature c was declared for this scenario")
    res = space_form_residual(frame, float(c))
    if res > tol:
        sweep = sectional_sweep(frame)
        raise NotConstantCurvature(
            f"ambient is not a space form of curvature {c}: residual {res:.3e}, "
            f"frame sectional curvatures range over [{sweep.min():.6g}, {sweep.max():.6g}]"
        )
    return res


def _require_kind(spec):
    if spec.kind not in KINDS:
        raise ValueError(f"Chen inequalities need an SSM or SSNM connection, got {spec.kind}")


# -- orthonormal D frames ---------------------------------------------------------------


def _complete(rows: np.ndarray, n: int) -> np.ndarray:
    """Orthonormal n x n matrix whose leading rows span ``rows`` (in order)."""
    k = rows.shape[0]
    mat = np.concatenate([rows.T, np.eye(n)], axis=1)
    q, r = np.linalg.qr(mat)
    signs = np.sign(np.diag(r)[:k])
    signs[signs == 0] = 1.0
    q = q[:, :n].copy()
    q[:, :k] *= signs
    return q.T


def _position(dist, i):
    if i not in dist.indices:
        raise ValueError(f"frame index {i} is not in the distribution")
    return dist.indices.index(i)


def plane_basis(dist: Distribution, plane=(None, None)) -> np.ndarray:
    """Orthonormal Q whose first two rows span the plane.

    ``plane`` holds two frame indices in D or two coefficient vectors over
    the unit D frame (orthonormalized in order).
    """
    n = dist.rank
    a, b = plane
    if a is None:
        a, b = dist.indices[0], dist.indices[1]
    vecs = []
    for v in (a, b):
        if np.ndim(v) == 0:
            e = np.zeros(n)
            e[_position(dist, int(v))] = 1.0
            vecs.append(e)
        else:
            vecs.append(np.asarray(v, dtype=float))
    rows = np.array(vecs)
    if np.linalg.matrix_rank(rows, tol=1e-10) < 2:
        raise ValueError("plane needs two independent directions")
    return _complete(rows, n)


def direction_basis(dist: Distribution, x=None, normalize=False) -> np.ndarray:
    """Orthonormal Q with first row the unit direction ``x``.

    ``x`` is a frame index in D, a coefficient vector over the unit D frame,
    or a field batch of shape (m,) that must be a constant combination of
    the unit D frame.
    """
    n = dist.rank
    tol = dist.frame.plan.rel_tol
    if x is None:
        x = dist.indices[0]
    if isinstance(x, JetArray):
        frame = dist.frame
        dist.require_tangent(x)
        norm = frame.norm_sq(x).values
        if np.max(np.abs(norm - 1.0)) > tol:
            raise NotUnit(f"g(X, X) ranges over [{norm.min():.12g}, {norm.max():.12g}]")
        coeffs = frame.inner(JetArray(np.broadcast_to(x.c, (n,) + x.c.shape)), dist.unit_basis()).values
        if np.max(np.ptp(coeffs, axis=1)) > dist.tol:
            raise ValueError("X must be a constant combination of the unit D frame")
        vec = coeffs[:, 0]
    elif np.ndim(x) == 0:
        vec = np.zeros(n)
        vec[_position(dist, int(x))] = 1.0
    else:
        vec = np.asarray(x, dtype=float)
        if vec.shape != (n,):
            raise ValueError(f"X needs {n} coefficients over the unit D frame")
        norm = float(vec @ vec)
        if abs(norm - 1.0) > tol:
            if not normalize:
                raise NotUnit(f"g(X, X) = {norm:.12g}")
            vec = vec / np.sqrt(norm)
    return _complete(vec[None, :], n)


def rotation(n: int, angle: float, i=0, j=1) -> np.ndarray:
    q = np.eye(n)
    c, s = np.cos(angle), np.sin(angle)
    q[i, i], q[i, j], q[j, i], q[j, j] = c, s, -s, c
    return q


# -- named quantities --------------------------------------------------------------------


@dataclass
class ChenQuantities:
    """Pointwise values (arrays over sample points) over one orthonormal D frame."""

    kind: str
    c: float
    n: int
    basis: np.ndarray
    alpha: np.ndarray  # (n, n, P)
    alpha1: np.ndarray
    lam: np.ndarray
    lam1: np.ndarray
    A_D: np.ndarray
    Omega_Pi: np.ndarray
    Omega_Pi_star: np.ndarray
    tr_alpha1_Pi: np.ndarray
    tr_B_Pi: JetArray
    omega_tr_B_Pi: np.ndarray
    omega_H: np.ndarray
    normB_sq: np.ndarray
    normBtilde_sq: np.ndarray
    H_norm_sq: np.ndarray
    Htilde_norm_sq: np.ndarray
    h: np.ndarray  # (p, n, n, P): g(B(E'_i, E'_j), N_r)
    htilde: np.ndarray
    A_D_X: np.ndarray
    normB_X_sq: np.ndarray
    normBtilde_X_sq: np.ndarray
    omega_B_XX: np.ndarray


def _frame_batches(dist: Distribution, q: np.ndarray):
    n = dist.rank
    e = JetArray(np.tensordot(q, dist.unit_basis().c, axes=(1, 0)))
    ii, jj = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    return e, e[ii.ravel()], e[jj.ravel()]


def chen_quantities(dist: Distribution, spec: ConnectionSpec, c: float, basis=None) -> ChenQuantities:
    _require_kind(spec)
    frame = dist.frame
    n = dist.rank
    q = np.eye(n) if basis is None else np.asarray(basis, dtype=float)
    geo = ClosedFormGeometry(dist, spec)
    e, x, y = _frame_batches(dist, q)

    def grid(jet):
        return jet.values.reshape((n, n) + jet.values.shape[1:])

    b = geo.lc_b(x, y)
    bt = geo.b(x, y)
    br = frame.bracket(x, y)
    om_y = geo.omega(y)
    # (nabla_X omega)(Y) = X(omega(Y)) - omega(nabla_X Y)
    dom = frame.apply(x, om_y) - geo.omega(geo.lc_cov(x, y))
    alpha1 = dom - geo.omega(x) * om_y
    om_u = geo.omega(geo.u)
    alpha = alpha1 + frame.inner(x, y) * om_u * 0.5
    a1, a = grid(alpha1), grid(alpha)

    bv = b.values.reshape((n, n) + b.values.shape[1:])
    btv = bt.values.reshape(bv.shape)
    brv = br.values.reshape(bv.shape)
    gv = frame.g.values
    ip = lambda u, v: np.einsum("...kP,...kP,kP->...P", u, v, gv)  # noqa: E731

    bb_br = ip(bv, brv)  # g(B(E'_i, E'_j), [E'_i, E'_j])
    diag = np.arange(n)
    hvec = bv[diag, diag].sum(axis=0) / n
    htvec = btv[diag, diag].sum(axis=0) / n
    uv = geo.u.values
    omega_of = lambda v: np.einsum("...kP,kP,kP->...P", v, uv, gv)  # noqa: E731
    tr_b = JetArray(b.c.reshape((n, n) + b.c.shape[1:])[0, 0] + b.c.reshape((n, n) + b.c.shape[1:])[1, 1])
    omega_part = 0.5 * ip(bv[0, 1] - bv[1, 0], brv[0, 1])

    normals = dist.unit_perp_basis().values
    h = np.einsum("ijkP,rkP,kP->rijP", bv, normals, gv)
    ht = np.einsum("ijkP,rkP,kP->rijP", btv, normals, gv)
    rest = np.arange(1, n)
    return ChenQuantities(
        kind=spec.kind,
        c=float(c),
        n=n,
        basis=q,
        alpha=a,
        alpha1=a1,
        lam=np.trace(a, axis1=0, axis2=1),
        lam1=np.trace(a1, axis1=0, axis2=1),
        A_D=0.5 * bb_br.sum(axis=(0, 1)),
        Omega_Pi=a[0, 0] + a[1, 1] - omega_part,
        Omega_Pi_star=-omega_part,
        tr_alpha1_Pi=a1[0, 0] + a1[1, 1],
        tr_B_Pi=tr_b,
        omega_tr_B_Pi=omega_of(bv[0, 0] + bv[1, 1]),
        omega_H=omega_of(hvec),
        normB_sq=ip(bv, bv).sum(axis=(0, 1)),
        normBtilde_sq=ip(btv, btv).sum(axis=(0, 1)),
        H_norm_sq=ip(hvec, hvec),
        Htilde_norm_sq=ip(htvec, htvec),
        h=h,
        htilde=ht,
        A_D_X=bb_br[rest, 0].sum(axis=0),
        normB_X_sq=(ip(bv[0, rest], bv[0, rest]) + ip(bv[rest, 0], bv[rest, 0])).sum(axis=0),
        normBtilde_X_sq=(ip(btv[0, rest], btv[0, rest]) + ip(btv[rest, 0], btv[rest, 0])).sum(axis=0),
        omega_B_XX=omega_of(bv[0, 0]),
    )


# -- raw coefficient arrays from the ambient tables ---------------------------------------


@dataclass
class RawTables:
    """Coefficients over (E'_i) and the unit normals, from frame tables only."""

    h: np.ndarray  # Levi-Civita, (p, n, n, P)
    htilde: np.ndarray  # ambient connection of the spec
    beta: np.ndarray  # normal part of [E'_i, E'_j]: (p, n, n, P)
    alpha1: np.ndarray  # (n, n, P)
    alpha: np.ndarray
    u_perp: np.ndarray  # g(U, N_r): (p, P)


def raw_tables(dist: Distribution, spec: ConnectionSpec, basis=None) -> RawTables:
    frame = dist.frame
    n = dist.rank
    q = np.eye(n) if basis is None else np.asarray(basis, dtype=float)
    d, perp = list(dist.indices), list(dist.complement)
    g = frame.g.values
    s = np.sqrt(g)
    lc = frame.levi_civita.values
    amb = ambient_connection(frame, spec).values
    cv = frame.c.values

    def normal_coeffs(tab):
        # g(T(E~_a, E~_b), N~_r) for a table T[a, b, k] of coefficients of E_k
        sub = tab[np.ix_(d, d, perp)]
        return sub * s[perp][None, None] / (s[d][:, None, None] * s[d][None, :, None])

    def rotate(t):
        return np.einsum("ia,jb,rabP->rijP", q, q, t.transpose(2, 0, 1, 3))

    # alpha on the unnormalized frame, from the Levi-Civita table and U
    u = frame.field(spec.U)
    omega = u * frame.g  # omega(E_k) = g_k u^k
    dom = jeinsum("a,b->ab", frame.w, omega.d()) - jeinsum("abk,k->ab", frame.levi_civita, omega)
    a1 = (dom - jeinsum("a,b->ab", omega, omega)).values
    om_u = (omega * u).values.sum(axis=0)
    a0 = a1 + 0.5 * np.einsum("ab,aP,P->abP", np.eye(frame.m), g, om_u)

    def rotate2(t):
        sub = t[np.ix_(d, d)] / (s[d][:, None] * s[d][None, :])
        return np.einsum("ia,jb,abP->ijP", q, q, sub)

    return RawTables(
        h=rotate(normal_coeffs(lc)),
        htilde=rotate(normal_coeffs(amb)),
        beta=rotate(normal_coeffs(cv)),
        alpha1=rotate2(a1),
        alpha=rotate2(a0),
        u_perp=u.values[perp] * s[perp],
    )


# -- algebraic lemmas ----------------------------------------------------------------


def algebraic_lemmas(h) -> dict:
    """Both sides of the two mean-curvature lemmas for an array ``h[r, i, j]``.

    Extra trailing axes (sample points) are carried along.
    """
    h = np.asarray(h, dtype=float)
    if h.ndim < 3 or h.shape[1] != h.shape[2]:
        raise ValueError(f"expected an (p, n, n, ...) array, got shape {h.shape}")
    n = h.shape[1]
    if n < 2:
        raise DimensionTooSmall("lemmas need n >= 2")
    dg = np.einsum("rii...->ri...", h)
    mean_sq = ((dg.sum(axis=1) / n) ** 2).sum(axis=0)
    out = {
        "lhs54": (dg[:, 0] * dg[:, 1:].sum(axis=1)).sum(axis=0),
        "rhs54": n * n / 4.0 * mean_sq,
    }
    if n >= 3:
        rest = dg[:, 2:]
        pair = (rest.sum(axis=1) ** 2 - (rest**2).sum(axis=1)) / 2.0
        out["lhs48"] = ((dg[:, 0] + dg[:, 1]) * rest.sum(axis=1) + pair).sum(axis=0)
        out["rhs48"] = n * n * (n - 2) / (2.0 * (n - 1)) * mean_sq
    return out


# -- left-hand sides --------------------------------------------------------------------


def _lhs_values(dist, spec, q, which):
    """``R^D(E'_i, E'_j, E'_j, E'_i)`` for the needed pairs, from the ambient table."""
    geo = DirectGeometry(dist, spec)
    frame = dist.frame
    n = dist.rank
    e = JetArray(np.tensordot(q, dist.unit_basis().c, axes=(1, 0)))
    if which == "first":
        keys = [(i, j) for i in range(n) for j in range(n) if i != j]
    else:
        keys = [(0, j) for j in range(1, n)]
    xi = e[[k[0] for k in keys]]
    xj = e[[k[1] for k in keys]]
    r = frame.inner(geo.curvature_d(xi, xj, xj), xi).values
    vals = dict(zip(keys, r))
    if which == "first":
        tau = 0.5 * sum(vals.values())
        r1212 = frame.inner(geo.curvature_d(e[[0]], e[[1]], e[[0]]), e[[1]]).values[0]
        k_pi = 0.5 * (vals[(0, 1)] - r1212)
        return tau, k_pi
    return sum(vals.values())


# -- results ------------------------------------------------------------------------------


@dataclass
class ChenResult:
    inequality: str
    kind: str
    n: int
    c: float
    lhs: np.ndarray
    rhs: np.ndarray
    rhs_raw: np.ndarray
    identity: np.ndarray  # exact right-hand side before the two estimates
    tol: float
    extra: dict = field(default_factory=dict)

    @property
    def slack(self) -> np.ndarray:
        return self.rhs - self.lhs

    @property
    def passed(self) -> bool:
        return bool(np.all(self.slack >= -self.tol))

    @property
    def two_path_residual(self) -> float:
        return float(np.max(np.abs(self.rhs - self.rhs_raw)))

    @property
    def identity_residual(self) -> float:
        return float(np.max(np.abs(self.lhs - self.identity)))

    def as_dict(self):
        out = {
            "name": f"chen_{self.inequality}/{self.kind}",
            "pass": self.passed,
            "min_slack": float(np.min(self.slack)),
            "max_lhs": float(np.max(np.abs(self.lhs))),
            "two_path_residual": self.two_path_residual,
            "identity_residual": self.identity_residual,
            "tol": self.tol,
        }
        for key, val in sorted(self.extra.items()):
            out[key] = float(np.min(val)) if key.startswith("slack") else float(np.max(np.abs(val)))
        return out


def _prepare(dist, spec, c, need):
    _require_kind(spec)
    if dist.rank < need:
        raise DimensionTooSmall(f"dim D = {dist.rank} but the inequality needs n >= {need}")
    require_space_form(dist.frame, c)


def _h_products(ht):
    """Exact sums that the two estimates bound, per sample point."""
    n = ht.shape[1]
    dg = np.einsum("rii...->ri...", ht)
    lem = algebraic_lemmas(ht)
    iu = np.triu_indices(n, 1)
    cross = (ht[:, iu[0], iu[1]] * ht[:, iu[1], iu[0]]).sum(axis=(0, 1))
    first = lem.get("lhs48", 0.0) - cross + (ht[:, 0, 1] * ht[:, 1, 0]).sum(axis=0)
    ricci = lem["lhs54"] - (ht[:, 0, 1:] * ht[:, 1:, 0]).sum(axis=(0, 1))
    return first, ricci, dg


def chen_first(dist: Distribution, spec: ConnectionSpec, plane=(None, None), c=None, tol=None) -> ChenResult:
    """``tau^D - K^D(plane)`` against its bound in a space form of curvature ``c``."""
    _prepare(dist, spec, c, 3)
    n = dist.rank
    c = float(c)
    tol = dist.frame.plan.abs_tol if tol is None else tol
    q = plane_basis(dist, plane)
    cq = chen_quantities(dist, spec, c, q)
    raw = raw_tables(dist, spec, q)
    tau, k_pi = _lhs_values(dist, spec, q, "first")
    lhs = tau - k_pi
    base = (n + 1) * (n - 2) / 2.0 * c
    hcoef = n * n * (n - 2) / (2.0 * (n - 1))
    a_raw = 0.5 * np.einsum("rjiP,rjiP->P", raw.h, raw.beta)
    om_star_raw = -0.5 * ((raw.h[:, 0, 1] - raw.h[:, 1, 0]) * raw.beta[:, 0, 1]).sum(axis=0)
    ht_raw = raw.htilde
    mean_raw = (np.einsum("rii...->ri...", ht_raw).sum(axis=1) / n) ** 2
    norm_raw = 0.5 * (ht_raw**2).sum(axis=(0, 1, 2))
    exact, _, _ = _h_products(ht_raw)
    extra = {}
    if spec.kind == "SSM":
        rhs = (
            base - (n - 1) * cq.lam + cq.A_D + cq.Omega_Pi + hcoef * cq.Htilde_norm_sq + 0.5 * cq.normBtilde_sq
        )
        lam_raw = np.trace(raw.alpha, axis1=0, axis2=1)
        om_raw = raw.alpha[0, 0] + raw.alpha[1, 1] + om_star_raw
        head = base - (n - 1) * lam_raw + a_raw + om_raw
    else:
        rhs = (
            base
            - (n - 1) / 2.0 * cq.lam1
            - n * (n - 1) / 2.0 * cq.omega_H
            + 0.5 * cq.tr_alpha1_Pi
            + 0.5 * cq.omega_tr_B_Pi
            + cq.A_D
            + cq.Omega_Pi_star
            + hcoef * cq.H_norm_sq
            + 0.5 * cq.normB_sq
        )
        lam1_raw = np.trace(raw.alpha1, axis1=0, axis2=1)
        dg = np.einsum("rii...->ri...", raw.h)
        om_h_raw = (raw.u_perp * dg.sum(axis=1) / n).sum(axis=0)
        om_tr_raw = (raw.u_perp * (dg[:, 0] + dg[:, 1])).sum(axis=0)
        head = (
            base
            - (n - 1) / 2.0 * lam1_raw
            - n * (n - 1) / 2.0 * om_h_raw
            + 0.5 * (raw.alpha1[0, 0] + raw.alpha1[1, 1])
            + 0.5 * om_tr_raw
            + a_raw
            + om_star_raw
        )
        # the same expansion with lambda in place of lambda_1
        lam_raw = np.trace(raw.alpha, axis1=0, axis2=1)
        extra["identity_residual_lambda"] = lhs - (head - (n - 1) / 2.0 * (lam_raw - lam1_raw) + exact)
    rhs_raw = head + hcoef * mean_raw.sum(axis=0) + norm_raw
    return ChenResult("first", spec.kind, n, c, lhs, rhs, rhs_raw, head + exact, tol, extra)


def chen_ricci(dist: Distribution, spec: ConnectionSpec, x=None, c=None, tol=None, normalize=False) -> ChenResult:
    """``Ric^D(X)`` against its bound in a space form of curvature ``c``.

    For SSNM the bound uses lambda_1, which is what the curvature expansion
    produces; the variant with lambda is reported as ``slack_lambda``.
    """
    _prepare(dist, spec, c, 2)
    n = dist.rank
    c = float(c)
    tol = dist.frame.plan.abs_tol if tol is None else tol
    q = direction_basis(dist, x, normalize)
    cq = chen_quantities(dist, spec, c, q)
    raw = raw_tables(dist, spec, q)
    lhs = _lhs_values(dist, spec, q, "ricci")
    hcoef = n * n / 4.0
    a_x_raw = np.einsum("rjP,rjP->P", raw.h[:, 1:, 0], raw.beta[:, 1:, 0])
    ht_raw = raw.htilde
    mean_raw = ((np.einsum("rii...->ri...", ht_raw).sum(axis=1) / n) ** 2).sum(axis=0)
    norm_x_raw = 0.5 * ((ht_raw[:, 0, 1:] ** 2).sum(axis=(0, 1)) + (ht_raw[:, 1:, 0] ** 2).sum(axis=(0, 1)))
    _, exact, _ = _h_products(ht_raw)
    extra = {}
    base = (n - 1) * c
    if spec.kind == "SSM":
        rhs = base - cq.lam + (2 - n) * cq.alpha[0, 0] + hcoef * cq.Htilde_norm_sq + 0.5 * cq.normBtilde_X_sq + cq.A_D_X
        head = base - np.trace(raw.alpha, axis1=0, axis2=1) + (2 - n) * raw.alpha[0, 0] + a_x_raw
    else:
        dg = np.einsum("rii...->ri...", raw.h)
        om_h_raw = (raw.u_perp * dg.sum(axis=1) / n).sum(axis=0)
        om_bxx_raw = (raw.u_perp * dg[:, 0]).sum(axis=0)
        rhs = (
            base
            - cq.lam1
            + cq.alpha1[0, 0]
            - n * cq.omega_H
            + cq.omega_B_XX
            + hcoef * cq.H_norm_sq
            + 0.5 * cq.normB_X_sq
            + cq.A_D_X
        )
        head = (
            base
            - np.trace(raw.alpha1, axis1=0, axis2=1)
            + raw.alpha1[0, 0]
            - n * om_h_raw
            + om_bxx_raw
            + a_x_raw
        )
        shift = cq.lam - cq.lam1
        extra["slack_lambda"] = rhs - shift - lhs
        extra["identity_residual_lambda"] = lhs - (head - shift + exact)
    rhs_raw = head + hcoef * mean_raw + norm_x_raw
    return ChenResult("ricci", spec.kind, n, c, lhs, rhs, rhs_raw, head + exact, tol, extra)


# -- equality cases and frame independence -----------------------------------------------


@dataclass
class EqualityReport:
    inequality: str
    conditions: np.ndarray  # bool per sample point
    slack_zero: np.ndarray
    condition_residual: np.ndarray
    slack: np.ndarray

    @property
    def consistent(self) -> bool:
        """No sample point has zero slack while the conditions fail."""
        return not bool(np.any(self.slack_zero & ~self.conditions))

    def as_dict(self):
        return {
            "inequality": self.inequality,
            "conditions_hold": [bool(v) for v in self.conditions],
            "slack_zero": [bool(v) for v in self.slack_zero],
            "consistent": self.consistent,
            "max_condition_residual": float(np.max(self.condition_residual)),
            "min_slack": float(np.min(self.slack)),
        }


def equality_diagnosis(dist, spec, kind="first", c=None, plane=(None, None), x=None, tol=None) -> EqualityReport:
    """Side-by-side: equality-case conditions on ``h`` and vanishing slack, per sample point."""
    tol = dist.frame.plan.abs_tol if tol is None else tol
    if kind == "first":
        res = chen_first(dist, spec, plane, c)
        ht = raw_tables(dist, spec, plane_basis(dist, plane)).htilde
        sym = np.abs(ht + ht.transpose(0, 2, 1, 3)).max(axis=(0, 1, 2))
        plane_terms = np.maximum(np.abs(ht[:, 0, 1]).max(axis=0), np.abs(ht[:, 1, 0]).max(axis=0))
        resid = np.maximum(sym, plane_terms)
    elif kind == "ricci":
        res = chen_ricci(dist, spec, x, c)
        ht = raw_tables(dist, spec, direction_basis(dist, x)).htilde
        anti = np.abs(ht[:, 0, 1:] + ht[:, 1:, 0]).max(axis=(0, 1))
        dg = np.einsum("rii...->ri...", ht)
        trace = np.abs(dg[:, 0] - dg[:, 1:].sum(axis=1)).max(axis=0)
        resid = np.maximum(anti, trace)
    else:
        raise ValueError(f"unknown inequality {kind!r}")
    slack = res.slack
    return EqualityReport(kind, resid <= tol, np.abs(slack) <= tol, resid, slack)


def frame_independence(dist, spec, c=0.0, angles=(np.pi / 6, np.pi / 3)) -> dict:
    """Change of A^D and Omega^Pi when (E_1, E_2) is rotated within its plane."""
    base = chen_quantities(dist, spec, c)
    out = {"A_D": 0.0, "Omega_Pi": 0.0, "Omega_Pi_star": 0.0}
    for ang in angles:
        rot = chen_quantities(dist, spec, c, rotation(dist.rank, ang))
        for key in out:
            diff = np.max(np.abs(getattr(rot, key) - getattr(base, key)))
            out[key] = max(out[key], float(diff))
    return out


__all__ = [
    "ChenQuantities",
    "ChenResult",
    "DimensionTooSmall",
    "EqualityReport",
    "NotConstantCurvature",
    "NotUnit",
    "algebraic_lemmas",
    "chen_first",
    "chen_quantities",
    "chen_ricci",
    "direction_basis",
    "equality_diagnosis",
    "frame_independence",
    "plane_basis",
    "raw_tables",
    "require_space_form",
    "rotation",
    "space_form_residual",
]
