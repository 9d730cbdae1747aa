"""Monic potential polynomials and their derived two/three-strand toolkit.

For a monic potential p(x) = x^{n+1} + sum c_i x^i this module provides the
polynomials that drive every matrix factorization in the package:

* pi(i,j)        difference quotient (p(x_i)-p(x_j))/(x_i-x_j); pi(i,i) = p'(x_i)
* sym2()         g with g(x+y, xy) = p(x)+p(y)
* uv(i,j,k,l)    the wide-edge Koszul row entries u, v
* e3(i,j,k)      the saddle-map coefficient e_{ijk}
* sym3_rows(...) the six Koszul entries of the triple wide edge
* gornik_f(n,k)  the root-of-unity circle basis polynomials f_k

Formulas that involve difference quotients are always computed with fresh
formal variables and then specialized, so coinciding markings are fine.
"""

from __future__ import annotations

from .fields import QQ, CyclotomicField, rat
from .poly import Poly, divide_exact

_FRESH = ["@a", "@b", "@c", "@d", "@e", "@f"]


class Potential:
    """p(x) = x^{n+1} + sum_{i=0}^{n} c_i x^i with exact rational c_i."""

    def __init__(self, n, coeffs=None):
        if n < 2:
            raise ValueError("potential requires n >= 2")
        self.n = n
        cs = {}
        if coeffs:
            for i, c in dict(coeffs).items():
                if not 0 <= i <= n:
                    raise ValueError("coefficient index out of range")
                c = rat(c)
                if c:
                    cs[i] = c
        self.coeffs = cs
        self._cache = {}

    @classmethod
    def sln(cls, n):
        """The homogeneous potential x^{n+1}."""
        return cls(n)

    @classmethod
    def gornik(cls, n):
        """x^{n+1} - (n+1)x, whose derivative is (n+1)(x^n - 1)."""
        return cls(n, {1: -(n + 1)})

    @property
    def is_homogeneous(self):
        return not self.coeffs

    @property
    def is_gornik(self):
        return self.coeffs == {1: rat(-(self.n + 1))}

    def base_field(self):
        """Natural coefficient field: Q(zeta_n) for the Gornik potential."""
        return CyclotomicField(self.n) if self.is_gornik else QQ

    def __repr__(self):
        s = "x^%d" % (self.n + 1)
        for i in sorted(self.coeffs, reverse=True):
            c = self.coeffs[i]
            xs = "x^%d" % i if i > 1 else ("x" if i == 1 else "")
            s += " %s %s%s" % ("-" if c < 0 else "+", abs(c), xs)
        return s

    def __eq__(self, other):
        return (isinstance(other, Potential) and self.n == other.n
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.n, frozenset(self.coeffs.items())))

    # -- basic evaluations ---------------------------------------------------

    def at(self, var, field=QQ):
        """p(x_var) as a Poly."""
        x = Poly.var(var, field)
        p = x ** (self.n + 1)
        for i, c in self.coeffs.items():
            p = p + (x ** i).scale(field.from_rational(c))
        return p

    def derivative_at(self, var, field=QQ):
        return self.at(var, field).derivative(var)

    def top_at(self, var, field=QQ):
        """Top homogeneous part x^{n+1}."""
        return Poly.var(var, field) ** (self.n + 1)

    # -- difference quotient toolkit ------------------------------------------

    def _cached(self, key, builder):
        if key not in self._cache:
            self._cache[key] = builder()
        return self._cache[key]

    def pi(self, i, j, field=QQ):
        """pi_{ij}; degree 2n; pi_{ii} = p'(x_i) by the derivative rule."""
        if i == j:
            return self.derivative_at(i, field)

        def build():
            a, b = _FRESH[0], _FRESH[1]
            num = self.at(a, field) - self.at(b, field)
            den = Poly.var(a, field) - Poly.var(b, field)
            return divide_exact(num, den)

        base = self._cached(("pi", field.name), build)
        return base.substitute({_FRESH[0]: Poly.var(i, field),
                                _FRESH[1]: Poly.var(j, field)})

    def sym2(self, s="s", t="t", field=QQ):
        """g(s,t) with g(x+y, xy) = p(x)+p(y); deg s = 2, deg t = 4."""
        def build():
            x, y = _FRESH[0], _FRESH[1]
            px = Poly.var(x, field)
            py = Poly.var(y, field)
            target = self.at(x, field) + self.at(y, field)
            g = Poly.zero(field)
            while target:
                m, c = target.leading()
                d = dict(m)
                ea = d.get(x, 0)
                eb = d.get(y, 0)
                if ea < eb:
                    ea, eb = eb, ea
                g_term = (Poly.var("@s", field) ** (ea - eb)) * \
                         (Poly.var("@t", field) ** eb)
                g = g + g_term.scale(c)
                expand = ((px + py) ** (ea - eb)) * ((px * py) ** eb)
                target = target - expand.scale(c)
            return g

        g = self._cached(("sym2", field.name), build)
        return g.rename({"@s": s, "@t": t})

    def sym3(self, s1="s1", s2="s2", s3="s3", field=QQ):
        """h with h(x+y+z, xy+yz+zx, xyz) = p(x)+p(y)+p(z)."""
        def build():
            x, y, z = _FRESH[0], _FRESH[1], _FRESH[2]
            px, py, pz = (Poly.var(v, field) for v in (x, y, z))
            e1 = px + py + pz
            e2 = px * py + py * pz + pz * px
            e3 = px * py * pz
            target = self.at(x, field) + self.at(y, field) + self.at(z, field)
            h = Poly.zero(field)
            while target:
                m, c = target.leading()
                d = dict(m)
                exps = sorted((d.get(v, 0) for v in (x, y, z)), reverse=True)
                ea, eb, ec = exps
                h_term = (Poly.var("@s1", field) ** (ea - eb)) * \
                         (Poly.var("@s2", field) ** (eb - ec)) * \
                         (Poly.var("@s3", field) ** ec)
                h = h + h_term.scale(c)
                expand = (e1 ** (ea - eb)) * (e2 ** (eb - ec)) * (e3 ** ec)
                target = target - expand.scale(c)
            return h

        h = self._cached(("sym3", field.name), build)
        return h.rename({"@s1": s1, "@s2": s2, "@s3": s3})

    def uv(self, i, j, k, l, field=QQ):
        """Wide-edge entries (u_{ijkl}, v_{ijkl}) of degrees 2n, 2n-2."""
        def build():
            a, b, c, d = _FRESH[:4]
            pa, pb, pc, pd = (Poly.var(v, field) for v in (a, b, c, d))
            g = self.sym2("@s", "@t", field)
            g_ab = g.substitute({"@s": pa + pb, "@t": pa * pb})
            g_cd_ab = g.substitute({"@s": pc + pd, "@t": pa * pb})
            g_cd = g.substitute({"@s": pc + pd, "@t": pc * pd})
            u = divide_exact(g_ab - g_cd_ab, pa + pb - pc - pd)
            v = divide_exact(g_cd_ab - g_cd, pa * pb - pc * pd)
            return u, v

        u, v = self._cached(("uv", field.name), build)
        sub = {_FRESH[0]: Poly.var(i, field), _FRESH[1]: Poly.var(j, field),
               _FRESH[2]: Poly.var(k, field), _FRESH[3]: Poly.var(l, field)}
        return u.substitute(sub), v.substitute(sub)

    def e3(self, i, j, k, field=QQ):
        """e_{ijk}; the fraction divides exactly, degree 2n-4."""
        def build():
            a, b, c = _FRESH[:3]
            pa, pb, pc = (Poly.var(v, field) for v in (a, b, c))
            num = (pc - pb) * self.at(a, field) + \
                  (pa - pc) * self.at(b, field) + \
                  (pb - pa) * self.at(c, field)
            den = ((pa - pb) * (pb - pc) * (pc - pa)).scale(
                field.from_rational(2))
            return divide_exact(num, den)

        base = self._cached(("e3", field.name), build)
        return base.substitute({_FRESH[0]: Poly.var(i, field),
                                _FRESH[1]: Poly.var(j, field),
                                _FRESH[2]: Poly.var(k, field)})

    def sym3_rows(self, outs, ins, field=QQ):
        """Koszul rows ((a1,b1),(a2,b2),(a3,b3)) of the triple wide edge.

        outs/ins are the three exiting resp. entering markings; the potential
        identity sum a_m b_m = sum p(out) - sum p(in) holds exactly.
        """
        def build():
            ov = _FRESH[:3]
            iv = _FRESH[3:6]
            po = [Poly.var(v, field) for v in ov]
            pi_ = [Poly.var(v, field) for v in iv]
            s1 = po[0] + po[1] + po[2]
            s2 = po[0] * po[1] + po[1] * po[2] + po[2] * po[0]
            s3 = po[0] * po[1] * po[2]
            s4 = pi_[0] + pi_[1] + pi_[2]
            s5 = pi_[0] * pi_[1] + pi_[1] * pi_[2] + pi_[2] * pi_[0]
            s6 = pi_[0] * pi_[1] * pi_[2]
            h = self.sym3("@s1", "@s2", "@s3", field)

            def h_at(v1, v2, v3):
                return h.substitute({"@s1": v1, "@s2": v2, "@s3": v3})

            a1 = divide_exact(h_at(s1, s2, s3) - h_at(s4, s2, s3), s1 - s4)
            a2 = divide_exact(h_at(s4, s2, s3) - h_at(s4, s5, s3), s2 - s5)
            a3 = divide_exact(h_at(s4, s5, s3) - h_at(s4, s5, s6), s3 - s6)
            return a1, a2, a3, s1 - s4, s2 - s5, s3 - s6

        rows = self._cached(("sym3rows", field.name), build)
        sub = {}
        for v, name in zip(_FRESH[:3], outs):
            sub[v] = Poly.var(name, field)
        for v, name in zip(_FRESH[3:6], ins):
            sub[v] = Poly.var(name, field)
        a1, a2, a3, b1, b2, b3 = (q.substitute(sub) for q in rows)
        return (a1, b1), (a2, b2), (a3, b3)


class LabelOutOfRange(ValueError):
    """Gornik label k outside 0..n-1."""


def gornik_f(n, k, var="x"):
    """f_k(x) = sum_l x^l zeta^{-kl} over Q(zeta_n)."""
    if not 0 <= k <= n - 1:
        raise LabelOutOfRange("label %d not in 0..%d" % (k, n - 1))
    field = CyclotomicField(n)
    terms = {}
    for l in range(n):
        mono = ((var, l),) if l else ()
        terms[mono] = field.zeta_power(-k * l)
    return Poly(field, terms)
