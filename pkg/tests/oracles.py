"""Independent test oracles.

Everything here is deliberately self-contained: plain Fractions, dense
Gaussian elimination and the classical Frobenius-algebra state-sum cube for
n = 2 (Khovanov TQFT, and its Lee deformation x^2 = 1).  Nothing is imported
from the package's linear algebra or matrix-factorization machinery, so
these results are genuinely independent cross-checks.
"""

from __future__ import annotations

import itertools
from fractions import Fraction


# -- dense exact linear algebra ----------------------------------------------------


def rank(matrix):
    """Row rank of a list-of-lists of Fractions."""
    m = [row[:] for row in matrix]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    r = 0
    for c in range(cols):
        piv = None
        for i in range(r, rows):
            if m[i][c]:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = Fraction(1) / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(rows):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        r += 1
        if r == rows:
            break
    return r


def polynomial_long_division(f, g):
    """Exact division of dense one-variable rational polynomials.

    Coefficient lists lowest-degree first; returns (quotient, remainder).
    """
    f = [Fraction(c) for c in f]
    g = [Fraction(c) for c in g]
    while g and g[-1] == 0:
        g.pop()
    if not g:
        raise ZeroDivisionError
    q = [Fraction(0)] * max(0, len(f) - len(g) + 1)
    r = f[:]
    while len(r) >= len(g) and any(r):
        while r and r[-1] == 0:
            r.pop()
        if len(r) < len(g):
            break
        c = r[-1] / g[-1]
        d = len(r) - len(g)
        q[d] = c
        for i, gc in enumerate(g):
            r[i + d] -= c * gc
    while r and r[-1] == 0:
        r.pop()
    return q, r


# -- the n = 2 state-sum cube -------------------------------------------------------


class FrobeniusCube:
    """Khovanov's cube for a diagram, over Q, with TQFT A = Q[x]/(x^2 - t).

    t = 0 is the sl(2) homology, t = 1 the Lee deformation.  Gradings follow
    the standard conventions deg 1 = +1, deg x = -1, q = (sum of degrees)
    + height + n_+ - 2 n_-; the comparison with the package's tables is
    (cohdeg, level) = (-i, q).
    """

    def __init__(self, diagram, t=0):
        self.diagram = diagram
        self.t = Fraction(t)
        self.npos = sum(1 for c in diagram.crossings if c.sign > 0)
        self.nneg = len(diagram.crossings) - self.npos
        self._build()

    def _circles(self, bits):
        """Circles of the resolution; Khovanov 0-smoothing of a positive
        crossing is the oriented one, of a negative crossing the disoriented
        one."""
        joins = []
        for c, x in zip(bits, self.diagram.crossings):
            oriented = (c == 0) if x.sign > 0 else (c == 1)
            if oriented:
                joins.append((x.under_in, x.over_out))
                joins.append((x.over_in, x.under_out))
            else:
                joins.append((x.under_in, x.over_in))
                joins.append((x.under_out, x.over_out))
        joins += [(a, b) for (a, b) in self.diagram.joints]
        parent = {}

        def find(a):
            parent.setdefault(a, a)
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for a in self.diagram.arcs:
            find(a)
        for a, b in joins:
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb
        # free circles are already among the diagram's arcs
        circles = sorted({find(a) for a in self.diagram.arcs})
        samples = {}
        for a in self.diagram.arcs:
            samples.setdefault(find(a), a)
        return circles, find, samples

    def _build(self):
        nc = len(self.diagram.crossings)
        self.basis = []       # (bits, labels) with labels in {0,1}^circles: 1 = x
        self.index = {}
        self.circle_data = {}
        for bits in itertools.product((0, 1), repeat=nc):
            circles, find, samples = self._circles(bits)
            self.circle_data[bits] = (circles, find, samples)
            for labels in itertools.product((0, 1), repeat=len(circles)):
                self.index[(bits, labels)] = len(self.basis)
                self.basis.append((bits, labels))
        self.dim = len(self.basis)

        def grading(bits, labels):
            h = sum(bits)
            i = h - self.nneg
            degs = sum(1 if l == 0 else -1 for l in labels)
            q = degs + h + self.npos - 2 * self.nneg
            return i, q

        self.grading = {b: grading(*b) for b in self.basis}

        # differential: flip each 0-bit to 1 with the usual cube sign
        self.entries = {}
        for bits in itertools.product((0, 1), repeat=nc):
            circles, find, samples = self.circle_data[bits]
            pos_of = {c: k for k, c in enumerate(circles)}
            for c in range(nc):
                if bits[c] == 1:
                    continue
                tbits = bits[:c] + (1,) + bits[c + 1:]
                sign = (-1) ** sum(bits[:c])
                tcircles, tfind, _ = self.circle_data[tbits]
                tpos_of = {cc: k for k, cc in enumerate(tcircles)}
                x = self.diagram.crossings[c]
                ends = [x.under_in, x.over_in, x.under_out, x.over_out]
                src_cs = sorted({find(a) for a in ends})
                tgt_cs = sorted({tfind(a) for a in ends})

                def relabel(labels, new_by_tc):
                    out = [None] * len(tcircles)
                    for cc, k in pos_of.items():
                        if cc in src_cs:
                            continue
                        out[tpos_of[tfind(samples[cc])]] = labels[k]
                    for tc, val in new_by_tc.items():
                        out[tpos_of[tc]] = val
                    assert all(v is not None for v in out)
                    return tuple(out)

                for labels in itertools.product((0, 1),
                                                repeat=len(circles)):
                    j = self.index[(bits, labels)]
                    if len(src_cs) == 2 and len(tgt_cs) == 1:
                        la = labels[pos_of[src_cs[0]]]
                        lb = labels[pos_of[src_cs[1]]]
                        outs = []
                        if la + lb <= 1:
                            outs.append((la + lb, Fraction(1)))
                        elif self.t:
                            outs.append((0, self.t))  # x.x = t
                        for lv, coeff in outs:
                            tl = relabel(labels, {tgt_cs[0]: lv})
                            self._add(j, (tbits, tl), sign * coeff)
                    elif len(src_cs) == 1 and len(tgt_cs) == 2:
                        la = labels[pos_of[src_cs[0]]]
                        outs = []
                        if la == 0:
                            outs.append(((0, 1), Fraction(1)))
                            outs.append(((1, 0), Fraction(1)))
                        else:
                            outs.append(((1, 1), Fraction(1)))
                            if self.t:
                                outs.append(((0, 0), self.t))
                        for lv, coeff in outs:
                            tl = relabel(labels, {tgt_cs[0]: lv[0],
                                                  tgt_cs[1]: lv[1]})
                            self._add(j, (tbits, tl), sign * coeff)
                    else:
                        raise AssertionError("resolution change is not a "
                                             "merge or a split")

    def _add(self, j, target_key, coeff):
        i = self.index[target_key]
        self.entries[(i, j)] = self.entries.get((i, j), Fraction(0)) + coeff

    # -- homology ------------------------------------------------------------------

    def _indices_i(self, i):
        return [k for k, b in enumerate(self.basis)
                if self.grading[b][0] == i]

    def _matrix(self, rows_idx, cols_idx):
        pos = {k: r for r, k in enumerate(rows_idx)}
        out = [[Fraction(0)] * len(cols_idx) for _ in rows_idx]
        for cnum, j in enumerate(cols_idx):
            for (i, j2), c in self.entries.items():
                if j2 == j and i in pos:
                    out[pos[i]][cnum] = c
        return out

    def bigraded_dimensions(self):
        """{(i, q): dim} of the homology (t = 0 only)."""
        assert self.t == 0
        out = {}
        iqs = sorted({self.grading[b] for b in self.basis})
        for (i, q) in iqs:
            src = [k for k, b in enumerate(self.basis)
                   if self.grading[b] == (i, q)]
            below = [k for k, b in enumerate(self.basis)
                     if self.grading[b] == (i - 1, q)]
            above = [k for k, b in enumerate(self.basis)
                     if self.grading[b] == (i + 1, q)]
            d_out = self._matrix(above, src)
            d_in = self._matrix(src, below)
            dim = (len(src) - (rank(d_out) if above else 0)
                   - (rank(d_in) if below else 0))
            if dim:
                out[(i, q)] = dim
        return out

    def lee_levels(self):
        """Per cohomological degree, the q-filtration levels of the Lee
        homology (t = 1), with F_s the subcomplex spanned by q >= s."""
        assert self.t == 1
        levels = {}
        for i in sorted({self.grading[b][0] for b in self.basis}):
            src = self._indices_i(i)
            below = self._indices_i(i - 1)
            above = self._indices_i(i + 1)
            if not self._h_dim(src, below, above):
                continue
            qs = sorted({self.grading[self.basis[k]][1] for k in src},
                        reverse=True)
            lev = []
            prev = 0
            for s in qs:
                d = self._h_image_dim(src, below, above, s)
                lev.extend([s] * (d - prev))
                prev = max(prev, d)
            levels[i] = sorted(lev)
        return levels

    def _h_dim(self, src, below, above):
        d_out = self._matrix(above, src)
        d_in = self._matrix(src, below)
        return (len(src) - (rank(d_out) if above else 0)
                - (rank(d_in) if below else 0))

    def _h_image_dim(self, src, below, above, s):
        """dim of image of H(F_s) -> H at this degree."""
        sub = [k for k in src if self.grading[self.basis[k]][1] >= s]
        sub_above = [k for k in above
                     if self.grading[self.basis[k]][1] >= s]
        # cocycles in F_s: kernel of d restricted to sub
        d_sub = self._matrix(above, sub)
        ker_dim = len(sub) - (rank(d_sub) if above else 0)
        # modulo boundaries from the full complex: dim ker_s - dim(ker_s n B)
        d_in = self._matrix(src, below)
        # dim of (boundaries + F_s cocycles) - dim boundaries:
        b_rank = rank(d_in) if below else 0
        # build combined matrix: columns = boundary columns + kernel basis
        # kernel basis of d_sub:
        kb = _kernel_basis(d_sub, len(sub))
        cols = []
        pos = {k: r for r, k in enumerate(src)}
        for col in range(len(below)):
            v = [Fraction(0)] * len(src)
            for r in range(len(src)):
                v[r] = d_in[r][col]
            cols.append(v)
        for vec in kb:
            v = [Fraction(0)] * len(src)
            for val, k in zip(vec, sub):
                v[pos[k]] = val
            cols.append(v)
        comb_rank = rank([[cols[c][r] for c in range(len(cols))]
                          for r in range(len(src))]) if cols else 0
        return comb_rank - b_rank


def _kernel_basis(matrix, ncols):
    """Kernel basis (as column vectors) of a dense rational matrix."""
    rows = len(matrix)
    m = [row[:] for row in matrix]
    pivots = {}
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, rows):
            if m[i][c]:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = Fraction(1) / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(rows):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots[c] = r
        r += 1
        if r == rows:
            break
    free = [c for c in range(ncols) if c not in pivots]
    out = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for pc, pr in pivots.items():
            v[pc] = -m[pr][fc]
        out.append(v)
    return out


def khovanov_table(diagram):
    """Bigraded dims in the package's conventions: {(cohdeg, level): dim}."""
    cube = FrobeniusCube(diagram, t=0)
    return {(-i, q): d for (i, q), d in cube.bigraded_dimensions().items()}


def lee_filtration_extremes(diagram):
    """(smax, smin) of the Lee homology in the package's conventions."""
    cube = FrobeniusCube(diagram, t=1)
    levels = [l for ls in cube.lee_levels().values() for l in ls]
    return max(levels), min(levels)
