"""Symbolic frame calculus used as an independent oracle in the tests.

Fields are lists of sympy expressions in ``t`` (frame coefficients).  Nothing
here touches the jet engine.
"""

import sympy as sp

t = sp.symbols("t", real=True)


class SymFrame:
    def __init__(self, metric, brackets, weights):
        self.m = len(metric)
        self.g = [sp.sympify(x) for x in metric]
        self.w = [sp.sympify(x) for x in weights]
        c = {}
        for (i, j), terms in brackets.items():
            for k, e in terms.items():
                c[(i, j, k)] = sp.sympify(e)
                c[(j, i, k)] = -sp.sympify(e)
        self.c = c

    def cc(self, i, j, k):
        return self.c.get((i, j, k), sp.Integer(0))

    def basis(self, i):
        return [sp.Integer(1) if k == i else sp.Integer(0) for k in range(self.m)]

    def apply(self, x, phi):
        return sp.simplify(sum(x[i] * self.w[i] * sp.diff(phi, t) for i in range(self.m)))

    def inner(self, x, y):
        return sp.simplify(sum(self.g[i] * x[i] * y[i] for i in range(self.m)))

    def bracket(self, x, y):
        out = []
        for k in range(self.m):
            v = self.apply(x, y[k]) - self.apply(y, x[k])
            v += sum(x[i] * y[j] * self.cc(i, j, k) for i in range(self.m) for j in range(self.m))
            out.append(sp.simplify(v))
        return out

    def koszul(self):
        """gamma[i][j][k]: E_k-coefficient of nabla_{E_i} E_j (Levi-Civita)."""
        m = self.m
        gam = [[[0] * m for _ in range(m)] for _ in range(m)]
        for i in range(m):
            for j in range(m):
                for k in range(m):
                    ei, ej, ek = self.basis(i), self.basis(j), self.basis(k)
                    two = (
                        self.apply(ei, self.inner(ej, ek))
                        + self.apply(ej, self.inner(ek, ei))
                        - self.apply(ek, self.inner(ei, ej))
                        + self.inner(self.bracket(ei, ej), ek)
                        - self.inner(self.bracket(ej, ek), ei)
                        + self.inner(self.bracket(ek, ei), ej)
                    )
                    gam[i][j][k] = sp.simplify(two / (2 * self.g[k]))
        return gam

    def lc(self, x, y):
        gam = self.koszul_cached()
        out = []
        for k in range(self.m):
            v = self.apply(x, y[k]) + sum(
                x[i] * y[j] * gam[i][j][k] for i in range(self.m) for j in range(self.m)
            )
            out.append(sp.simplify(v))
        return out

    def koszul_cached(self):
        if not hasattr(self, "_gam"):
            self._gam = self.koszul()
        return self._gam


def add(*vs):
    return [sp.simplify(sum(c)) for c in zip(*vs)]


def smul(s, v):
    return [sp.simplify(s * x) for x in v]


class SymDistribution:
    def __init__(self, frame, indices, nabla):
        self.f = frame
        self.idx = set(indices)
        self.nabla = nabla

    def tan(self, v):
        return [v[i] if i in self.idx else sp.Integer(0) for i in range(self.f.m)]

    def nor(self, v):
        return [sp.Integer(0) if i in self.idx else v[i] for i in range(self.f.m)]

    def nd(self, x, y):
        return self.tan(self.nabla(x, y))

    def curvature(self, x, y, z):
        br = self.f.bracket(x, y)
        return add(
            self.nd(x, self.nd(y, z)),
            smul(-1, self.nd(y, self.nd(x, z))),
            smul(-1, self.nd(self.tan(br), z)),
            smul(-1, self.tan(self.f.bracket(self.nor(br), z))),
        )


def ssm(frame, u):
    def nabla(x, y):
        om = frame.inner(u, y)
        return add(frame.lc(x, y), smul(om, x), smul(-frame.inner(x, y), u))

    return nabla


def ssnm(frame, u):
    def nabla(x, y):
        return add(frame.lc(x, y), smul(frame.inner(u, y), x))

    return nabla


def ricci_d(dist, a, b):
    """sum_k g(R^D(E_a, E~_k) E_b, E~_k) over the D frame."""
    f = dist.f
    total = 0
    for k in sorted(dist.idx):
        r = dist.curvature(f.basis(a), f.basis(k), f.basis(b))
        total += r[k] * f.g[k] / f.g[k]
    return sp.simplify(total)


def warped(f, kind="sphere"):
    if kind == "sphere":
        br = {(1, 2): {3: 2}, (1, 3): {2: -2}, (2, 3): {1: 2}}
    else:
        br = {(1, 2): {3: 1}}
    return SymFrame([1, f**2, f**2, 1], br, [1, 0, 0, 0])
