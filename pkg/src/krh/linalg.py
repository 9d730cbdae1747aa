"""Sparse exact linear algebra over the package's coefficient fields.

Vectors are dicts {coordinate: nonzero field element}.  The central structure
is a reduced echelon basis with freely chosen pivot preference, which is what
filtration-adapted computations need: picking pivots of maximal quantum degree
makes membership, quotient levels and minimal-degree representatives all fall
out of plain reduction.
"""

from __future__ import annotations

from .fields import is_zero


def vec_add(u, v):
    out = dict(u)
    for k, c in v.items():
        s = out.get(k)
        s = c if s is None else s + c
        if is_zero(s):
            out.pop(k, None)
        else:
            out[k] = s
    return out


def vec_scale(u, c):
    if is_zero(c):
        return {}
    return {k: c * v for k, v in u.items()}


def vec_sub_scaled(u, v, c):
    """u - c*v in place-ish (returns new dict)."""
    out = dict(u)
    for k, w in v.items():
        s = out.get(k)
        d = c * w
        s = -d if s is None else s - d
        if is_zero(s):
            out.pop(k, None)
        else:
            out[k] = s
    return out


class Echelon:
    """Reduced echelon family of sparse vectors with payload tracking.

    ``key`` orders coordinates; the pivot of each stored vector is its
    maximal coordinate under ``key``.  Payloads combine linearly alongside,
    which yields preimages and coefficient expressions for free.
    """

    def __init__(self, key=None):
        self.key = key or (lambda c: c)
        self.rows = {}  # pivot -> (vector with vector[pivot] == 1, payload)

    def __len__(self):
        return len(self.rows)

    def pivots(self):
        return list(self.rows)

    def reduce(self, vector, payload=None):
        """Reduce ``vector``; returns (residue, residue_payload, coeffs).

        coeffs maps pivot -> coefficient such that
        vector = residue + sum coeffs[p] * rows[p].
        """
        v = dict(vector)
        pay = dict(payload or {})
        coeffs = {}
        while v:
            piv = max(v, key=self.key)
            if piv not in self.rows:
                break
            basev, basep = self.rows[piv]
            c = v[piv]
            coeffs[piv] = c
            v = vec_sub_scaled(v, basev, c)
            pay = vec_sub_scaled(pay, basep, c)
        return v, pay, coeffs

    def add(self, vector, payload=None):
        """Insert vector (if independent).  Returns pivot or None."""
        v, pay, _ = self.reduce(vector, payload)
        if not v:
            return None
        piv = max(v, key=self.key)
        c = v[piv]
        inv = 1 / c if not hasattr(c, "inverse") else c.inverse()
        v = vec_scale(v, inv)
        pay = vec_scale(pay, inv)
        # keep the family reduced: eliminate the new pivot from stored rows
        for p, (bv, bp) in list(self.rows.items()):
            if piv in bv:
                coef = bv[piv]
                self.rows[p] = (vec_sub_scaled(bv, v, coef),
                                vec_sub_scaled(bp, pay, coef))
        self.rows[piv] = (v, pay)
        return piv

    def contains(self, vector):
        v, _, _ = self.reduce(vector)
        return not v

    def solve(self, vector):
        """Write vector = sum c_i rows_i; returns (payload_combo, ok)."""
        v, pay, _ = self.reduce(vector)
        if v:
            return None, False
        return {k: -c for k, c in pay.items()}, True

    def basis_vectors(self):
        return [dict(v) for v, _ in self.rows.values()]


def span_dimension(vectors, key=None):
    ech = Echelon(key)
    for v in vectors:
        ech.add(v)
    return len(ech)
