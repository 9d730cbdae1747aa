"""Sparse multivariate polynomials with exact coefficients.

Variables are named markings (strings).  The quantum degree convention is
deg x = 2 for every marking; auxiliary symmetric-function variables may be
given other even weights via the optional ``weights`` arguments.  Terms are
kept in graded-lexicographic canonical order for printing and hashing.
"""

from __future__ import annotations

from .fields import QQ, is_zero

NEG_INF = float("-inf")


class NotDivisible(ArithmeticError):
    """Exact polynomial division left a nonzero remainder."""


class DivisionByZero(ZeroDivisionError):
    """Exact polynomial division by the zero polynomial."""


def _mono_mul(m1, m2):
    d = dict(m1)
    for v, e in m2:
        d[v] = d.get(v, 0) + e
    return tuple(sorted(d.items()))


def _mono_div(m1, m2):
    """m1 / m2, or None if not divisible."""
    d = dict(m1)
    for v, e in m2:
        r = d.get(v, 0) - e
        if r < 0:
            return None
        if r == 0:
            d.pop(v, None)
        else:
            d[v] = r
    return tuple(sorted(d.items()))


def mono_degree(m, weights=None):
    if weights is None:
        return 2 * sum(e for _, e in m)
    return sum(e * weights.get(v, 2) for v, e in m)


def _mono_sort_key(m, weights=None):
    """Sort key realizing graded-lex *descending*: min(key) = leading term.

    Higher total degree first; ties broken lexicographically with
    alphabetically earlier variables taking priority (larger exponent on an
    earlier variable = larger monomial).  Negating exponents makes plain
    tuple comparison do the right thing, including when a variable is absent.
    """
    return (-mono_degree(m, weights), tuple((v, -e) for v, e in m))


class Poly:
    """Sparse polynomial: monomial -> nonzero coefficient in a fixed field."""

    __slots__ = ("field", "terms")

    def __init__(self, field, terms=None):
        self.field = field
        self.terms = {}
        if terms:
            for m, c in terms.items():
                if not is_zero(c):
                    self.terms[m] = c

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, field=QQ):
        return cls(field)

    @classmethod
    def const(cls, c, field=QQ):
        if not isinstance(c, (int,)) and not hasattr(c, "denominator"):
            # already a field element (e.g. cyclotomic)
            return cls(field, {(): c})
        return cls(field, {(): field.from_rational(c) if c else field.zero})

    @classmethod
    def var(cls, name, field=QQ, exp=1):
        return cls(field, {((name, exp),): field.one})

    # -- ring operations ---------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Poly):
            return other
        return Poly.const(other, self.field)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m)
            s = c if s is None else s + c
            if is_zero(s):
                out.pop(m, None)
            else:
                out[m] = s
        p = Poly(self.field)
        p.terms = out
        return p

    __radd__ = __add__

    def __neg__(self):
        p = Poly(self.field)
        p.terms = {m: -c for m, c in self.terms.items()}
        return p

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        other = self._coerce(other)
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                c = c1 * c2
                if is_zero(c):
                    continue
                m = _mono_mul(m1, m2)
                s = out.get(m)
                s = c if s is None else s + c
                if is_zero(s):
                    out.pop(m, None)
                else:
                    out[m] = s
        p = Poly(self.field)
        p.terms = out
        return p

    __rmul__ = __mul__

    def __pow__(self, k):
        assert k >= 0
        result = Poly.const(1, self.field)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def scale(self, c):
        if is_zero(c):
            return Poly(self.field)
        p = Poly(self.field)
        p.terms = {m: c * v for m, v in self.terms.items()}
        return p

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.terms == other.terms
        return self.terms == self._coerce(other).terms

    def __bool__(self):
        return bool(self.terms)

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    # -- structure ---------------------------------------------------------

    def variables(self):
        vs = set()
        for m in self.terms:
            vs.update(v for v, _ in m)
        return vs

    def degree(self, weights=None):
        """Quantum degree (deg x = 2); deg 0 = -inf."""
        if not self.terms:
            return NEG_INF
        return max(mono_degree(m, weights) for m in self.terms)

    def is_constant(self):
        return all(m == () for m in self.terms)

    def constant_term(self):
        return self.terms.get((), self.field.zero)

    def leading(self, weights=None):
        m = min(self.terms, key=lambda m: _mono_sort_key(m, weights))
        return m, self.terms[m]

    def homogeneous_part(self, d, weights=None):
        p = Poly(self.field)
        p.terms = {m: c for m, c in self.terms.items()
                   if mono_degree(m, weights) == d}
        return p

    def homogeneous_components(self, weights=None):
        """dict degree -> homogeneous part (nonzero parts only)."""
        out = {}
        for m, c in self.terms.items():
            d = mono_degree(m, weights)
            out.setdefault(d, {})[m] = c
        comps = {}
        for d, terms in out.items():
            p = Poly(self.field)
            p.terms = terms
            comps[d] = p
        return comps

    def coefficient(self, var, exp):
        """Coefficient of var**exp, a polynomial in the other variables."""
        out = {}
        for m, c in self.terms.items():
            d = dict(m)
            if d.get(var, 0) == exp:
                d.pop(var, None)
                out[tuple(sorted(d.items()))] = c
        p = Poly(self.field)
        p.terms = out
        return p

    def max_exponent(self, var):
        return max((dict(m).get(var, 0) for m in self.terms), default=0)

    def derivative(self, var):
        out = {}
        for m, c in self.terms.items():
            d = dict(m)
            e = d.get(var, 0)
            if not e:
                continue
            if e == 1:
                d.pop(var)
            else:
                d[var] = e - 1
            mm = tuple(sorted(d.items()))
            s = out.get(mm, self.field.zero) + c * e
            if is_zero(s):
                out.pop(mm, None)
            else:
                out[mm] = s
        p = Poly(self.field)
        p.terms = out
        return p

    def substitute(self, assignments):
        """Substitute variables by polynomials: {var: Poly or const}."""
        result = Poly(self.field)
        cache = {}
        for m, c in self.terms.items():
            term = Poly.const(1, self.field).scale(c)
            for v, e in m:
                if v in assignments:
                    key = (v, e)
                    if key not in cache:
                        sub = assignments[v]
                        if not isinstance(sub, Poly):
                            sub = Poly.const(sub, self.field)
                        cache[key] = sub ** e
                    term = term * cache[key]
                else:
                    term = term * Poly.var(v, self.field, e)
            result = result + term
        return result

    def rename(self, mapping):
        """Injective variable rename {old: new}."""
        out = {}
        for m, c in self.terms.items():
            mm = tuple(sorted((mapping.get(v, v), e) for v, e in m))
            out[mm] = c
        p = Poly(self.field)
        p.terms = out
        return p

    def to_field(self, field):
        """Re-coefficient into a larger field (rationals embed)."""
        if field is self.field:
            return self
        p = Poly(field)
        p.terms = {m: field.from_rational(c) for m, c in self.terms.items()}
        return p

    # -- division ----------------------------------------------------------

    def divide_exact(self, g, weights=None):
        """Exact quotient self/g; raises NotDivisible or DivisionByZero."""
        if not isinstance(g, Poly):
            g = self._coerce(g)
        if not g:
            raise DivisionByZero("division by zero polynomial")
        rem = dict(self.terms)
        gm, gc = g.leading(weights)
        quot = {}
        while rem:
            m = min(rem, key=lambda m: _mono_sort_key(m, weights))
            c = rem[m]
            qm = _mono_div(m, gm)
            if qm is None:
                raise NotDivisible("remainder nonzero in exact division")
            qc = c / gc
            quot[qm] = quot.get(qm, self.field.zero) + qc
            for m2, c2 in g.terms.items():
                mm = _mono_mul(qm, m2)
                s = rem.get(mm, self.field.zero) - qc * c2
                if is_zero(s):
                    rem.pop(mm, None)
                else:
                    rem[mm] = s
        p = Poly(self.field)
        p.terms = {m: c for m, c in quot.items() if not is_zero(c)}
        return p

    # -- printing ----------------------------------------------------------

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, key=_mono_sort_key):
            c = self.terms[m]
            factors = ["%s^%d" % (v, e) if e > 1 else v for v, e in m]
            cs = self.field.element_str(c) if hasattr(self.field, "element_str") else str(c)
            if factors and cs == "1":
                parts.append("*".join(factors))
            elif factors:
                parts.append(cs + "*" + "*".join(factors))
            else:
                parts.append(cs)
        return " + ".join(parts)

    __repr__ = __str__


def divide_exact(f, g, weights=None):
    """Module-level exact division; f = q*g or raise."""
    if not isinstance(f, Poly):
        raise TypeError("divide_exact expects Poly")
    return f.divide_exact(g, weights)
