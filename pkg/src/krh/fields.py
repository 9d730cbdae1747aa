"""Exact coefficient fields: rationals and cyclotomic extensions Q(zeta_n).

All arithmetic in this package is exact.  Generic computations run over the
rationals; computations involving n-th roots of unity run over the cyclotomic
field Q(zeta_n), realized as polynomial residues modulo the n-th cyclotomic
polynomial.  No floating point is used anywhere.

Rationals are gmpy2.mpq when gmpy2 is importable (much faster), otherwise
fractions.Fraction.  Both expose identical arithmetic semantics.
"""

from __future__ import annotations

from fractions import Fraction

try:
    from gmpy2 import mpq as _RAT
except ImportError:  # pragma: no cover - gmpy2 is optional
    _RAT = Fraction

RAT_ZERO = _RAT(0)
RAT_ONE = _RAT(1)


def rat(a, b=1):
    """Exact rational a/b."""
    return _RAT(a, b)


def _poly_divmod(num, den):
    """Divide dense rational coefficient lists (lowest degree first)."""
    num = list(num)
    dl = len(den) - 1
    while den and den[-1] == 0:
        den = den[:-1]
        dl -= 1
    lead = den[-1]
    quot = [RAT_ZERO] * max(0, len(num) - dl)
    for i in range(len(num) - 1, dl - 1, -1):
        c = num[i] / lead
        quot[i - dl] = c
        if c:
            for j in range(dl + 1):
                num[i - dl + j] -= c * den[j]
    while num and num[-1] == 0:
        num.pop()
    return quot, num


def cyclotomic_polynomial(n):
    """Coefficients (lowest first) of the n-th cyclotomic polynomial."""
    poly = [_RAT(-1)] + [RAT_ZERO] * (n - 1) + [RAT_ONE]  # z^n - 1
    for d in range(1, n):
        if n % d == 0:
            phi_d = cyclotomic_polynomial(d)
            poly, rem = _poly_divmod(poly, phi_d)
            assert not rem
    return poly


class RationalField:
    """The field Q.  Elements are raw mpq/Fraction values."""

    name = "Q"

    zero = RAT_ZERO
    one = RAT_ONE

    def __call__(self, a, b=1):
        return _RAT(a, b)

    def from_rational(self, r):
        return _RAT(r)

    def __repr__(self):
        return "Q"

    def element_str(self, c):
        return str(c)


class CyclotomicElement:
    """Residue of a rational polynomial in zeta modulo Phi_n(zeta)."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs):
        self.field = field
        self.coeffs = coeffs  # tuple of rationals, length = deg Phi_n

    def _lift(self, other):
        if isinstance(other, CyclotomicElement):
            if other.field is not self.field:
                raise ValueError("cyclotomic elements from different fields")
            return other
        if isinstance(other, (int, Fraction)) or type(other) is type(RAT_ONE):
            return self.field.from_rational(other)
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return CyclotomicElement(
            self.field, tuple(a + b for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicElement(self.field, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return CyclotomicElement(
            self.field, tuple(a - b for a, b in zip(self.coeffs, o.coeffs)))

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return CyclotomicElement(self.field, self.field._mulmod(self.coeffs, o.coeffs))

    __rmul__ = __mul__

    def inverse(self):
        return CyclotomicElement(self.field, self.field._invmod(self.coeffs))

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __eq__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return False
        return self.coeffs == o.coeffs

    def __bool__(self):
        return any(self.coeffs)

    def __hash__(self):
        return hash((id(self.field), self.coeffs))

    def __repr__(self):
        return self.field.element_str(self)


class CyclotomicField:
    """Q(zeta_n) = Q[z]/(Phi_n(z)) with exact arithmetic.

    zeta is a primitive n-th root of unity; for n <= 2 the field is Q itself
    (zeta = 1 or -1) but is kept in residue form for uniformity.
    """

    _cache = {}

    def __new__(cls, n):
        if n in cls._cache:
            return cls._cache[n]
        self = super().__new__(cls)
        cls._cache[n] = self
        self.n = n
        self.minimal_polynomial = tuple(cyclotomic_polynomial(n))
        self.degree = len(self.minimal_polynomial) - 1
        self.name = "Q(zeta_%d)" % n
        self.zero = CyclotomicElement(self, (RAT_ZERO,) * self.degree)
        self.one = self.from_rational(1)
        if self.degree >= 2:
            self.zeta = CyclotomicElement(
                self, (RAT_ZERO, RAT_ONE) + (RAT_ZERO,) * (self.degree - 2))
        else:
            # Phi_1 = z - 1, Phi_2 = z + 1: zeta is the rational root.
            root = -self.minimal_polynomial[0]
            self.zeta = CyclotomicElement(self, (root,))
        return self

    def __call__(self, a, b=1):
        return self.from_rational(_RAT(a, b))

    def from_rational(self, r):
        pad = (RAT_ZERO,) * (self.degree - 1)
        return CyclotomicElement(self, (_RAT(r),) + pad)

    def zeta_power(self, k):
        z = self.one
        for _ in range(k % self.n):
            z = z * self.zeta
        return z

    def _reduce(self, dense):
        phi = self.minimal_polynomial
        d = self.degree
        dense = list(dense)
        for i in range(len(dense) - 1, d - 1, -1):
            c = dense[i]
            if c:
                for j in range(d + 1):
                    dense[i - d + j] -= c * phi[j]
        dense = dense[:d]
        dense += [RAT_ZERO] * (d - len(dense))
        return tuple(dense)

    def _mulmod(self, a, b):
        out = [RAT_ZERO] * (2 * self.degree - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        out[i + j] += ai * bj
        return self._reduce(out)

    def _invmod(self, a):
        # Extended Euclid for a(z) modulo Phi_n(z) in Q[z].
        if not any(a):
            raise ZeroDivisionError("inverse of zero in %s" % self.name)
        r0 = list(self.minimal_polynomial)
        r1 = list(a)
        s0, s1 = [RAT_ZERO], [RAT_ONE]
        while True:
            while r1 and r1[-1] == 0:
                r1.pop()
            if len(r1) == 1:
                inv = 1 / r1[0]
                coeffs = [c * inv for c in s1]
                coeffs += [RAT_ZERO] * (self.degree - len(coeffs))
                return tuple(coeffs[:self.degree])
            q, r = _poly_divmod(r0, r1)
            s = list(s0)
            s += [RAT_ZERO] * (len(q) + len(s1) - 1 - len(s))
            for i, qi in enumerate(q):
                if qi:
                    for j, sj in enumerate(s1):
                        s[i + j] -= qi * sj
            r0, r1 = r1, r
            s0, s1 = s1, s

    def element_str(self, c):
        terms = []
        for i, a in enumerate(c.coeffs):
            if a == 0:
                continue
            if i == 0:
                terms.append(str(a))
            elif i == 1:
                terms.append("%s*z" % a if a != 1 else "z")
            else:
                terms.append("%s*z^%d" % (a, i) if a != 1 else "z^%d" % i)
        return "(" + " + ".join(terms) + ")" if terms else "0"

    def __repr__(self):
        return self.name


QQ = RationalField()


def is_zero(c):
    """Field-agnostic zero test."""
    return not c
