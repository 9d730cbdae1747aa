"""Integer Laurent polynomials in q: graded dimensions and MOY evaluations."""

from __future__ import annotations


class Laurent:
    """Sparse Laurent polynomial in q with integer coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        self.coeffs = {}
        if coeffs:
            for k, v in dict(coeffs).items():
                if v:
                    self.coeffs[k] = v

    @classmethod
    def q(cls, k=1, c=1):
        return cls({k: c})

    @classmethod
    def one(cls):
        return cls({0: 1})

    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def quantum_integer(cls, k):
        """[k] = q^{1-k} + q^{3-k} + ... + q^{k-1}."""
        if k <= 0:
            return cls()
        return cls({1 - k + 2 * i: 1 for i in range(k)})

    def __add__(self, other):
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0) + v
        return Laurent(out)

    def __sub__(self, other):
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0) - v
        return Laurent(out)

    def __neg__(self):
        return Laurent({k: -v for k, v in self.coeffs.items()})

    def __mul__(self, other):
        if isinstance(other, int):
            return Laurent({k: v * other for k, v in self.coeffs.items()})
        out = {}
        for k1, v1 in self.coeffs.items():
            for k2, v2 in other.coeffs.items():
                k = k1 + k2
                out[k] = out.get(k, 0) + v1 * v2
        return Laurent(out)

    __rmul__ = __mul__

    def shift(self, k):
        """Multiply by q^k (the {k} filtration shift)."""
        return Laurent({d + k: v for d, v in self.coeffs.items()})

    def __eq__(self, other):
        return isinstance(other, Laurent) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __bool__(self):
        return bool(self.coeffs)

    def __call__(self, q=1):
        return sum(v * q ** k for k, v in self.coeffs.items())

    def min_degree(self):
        return min(self.coeffs) if self.coeffs else 0

    def max_degree(self):
        return max(self.coeffs) if self.coeffs else 0

    def degrees(self):
        return sorted(self.coeffs)

    def __getitem__(self, k):
        return self.coeffs.get(k, 0)

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for k in sorted(self.coeffs):
            v = self.coeffs[k]
            if k == 0:
                parts.append(str(v))
            else:
                qs = "q" if k == 1 else "q^%d" % k
                parts.append(qs if v == 1 else "%d*%s" % (v, qs))
        return " + ".join(parts)

    __repr__ = __str__

    def to_dict(self):
        return dict(self.coeffs)
