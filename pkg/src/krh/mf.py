"""Filtered Z2-periodic matrix factorizations over polynomial rings.

A matrix factorization with potential w is a pair of free modules M^0, M^1
and differentials d0: M^0 -> M^1, d1: M^1 -> M^0 with d1 d0 = d0 d1 = w id,
both filtered of degree <= n+1.  Koszul factorizations (tensor products of
rank-2 rows (a, b)) are the workhorse; generators carry their row bit-vector
as provenance so that twists, row operations and variable exclusion can be
expressed without re-deriving bases.

Conventions match the two-row presentation

    d0 = [[a1, b2], [a2, -b1]],   d1 = [[b1, b2], [a2, -a1]]

i.e. the Leibniz sign on slot j is (-1)^(number of set bits to the right).
"""

from __future__ import annotations

from .fields import QQ, is_zero
from .poly import NEG_INF, Poly, divide_exact


class InvalidRow(ValueError):
    """Koszul row with a = 0 or deg(ab) > 2n+2."""


class ZeroScalar(ValueError):
    pass


class NotSquareZero(ValueError):
    pass


class NotFiltered(ValueError):
    pass


class DegreeBoundViolated(ValueError):
    pass


class NotSubstitutable(ValueError):
    """Row's b entry is not solvable for a variable."""


class DegreeMismatch(ValueError):
    """Excluded row must satisfy deg a + deg b = 2n+2."""


class PotentialMismatch(ValueError):
    pass


class KoszulRow:
    """A row (a, b) of a Koszul factorization; requires a != 0."""

    __slots__ = ("a", "b")

    def __init__(self, a, b):
        if not a:
            raise InvalidRow("Koszul row with a = 0")
        self.a = a
        self.b = b

    def check_degree(self, n):
        if (self.a * self.b).degree() > 2 * n + 2:
            raise InvalidRow("deg(a*b) exceeds 2n+2")

    def __repr__(self):
        return "(%s | %s)" % (self.a, self.b)


class GradedGen:
    """Free-module generator: Z2 parity, quantum shift, provenance label."""

    __slots__ = ("parity", "shift", "label")

    def __init__(self, parity, shift, label):
        self.parity = parity
        self.shift = shift
        self.label = label

    def __repr__(self):
        return "g%s[%d]{%d}" % (self.label, self.parity, self.shift)


class Chain:
    """Element of M^parity: sparse dict {generator index: Poly}."""

    __slots__ = ("mf", "parity", "comps")

    def __init__(self, mf, parity, comps=None):
        self.mf = mf
        self.parity = parity
        self.comps = {}
        if comps:
            for i, p in comps.items():
                if p:
                    self.comps[i] = p

    def __bool__(self):
        return bool(self.comps)

    def __add__(self, other):
        assert other.mf is self.mf and other.parity == self.parity
        out = dict(self.comps)
        for i, p in other.comps.items():
            s = out.get(i)
            s = p if s is None else s + p
            if s:
                out[i] = s
            else:
                out.pop(i, None)
        return Chain(self.mf, self.parity, out)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        return Chain(self.mf, self.parity,
                     {i: p.scale(self.mf.field.from_rational(c))
                      if isinstance(c, int) else p.scale(c)
                      for i, p in self.comps.items()})

    def times_poly(self, q):
        return Chain(self.mf, self.parity,
                     {i: p * q for i, p in self.comps.items()})

    def degree(self):
        gens = self.mf.gens[self.parity]
        degs = [p.degree() + gens[i].shift for i, p in self.comps.items()]
        return max(degs) if degs else NEG_INF

    def top_part(self):
        """Homogeneous part of maximal quantum degree."""
        d = self.degree()
        gens = self.mf.gens[self.parity]
        out = {}
        for i, p in self.comps.items():
            part = p.homogeneous_part(d - gens[i].shift)
            if part:
                out[i] = part
        return Chain(self.mf, self.parity, out)

    def homogeneous_part(self, d):
        gens = self.mf.gens[self.parity]
        out = {}
        for i, p in self.comps.items():
            part = p.homogeneous_part(d - gens[i].shift)
            if part:
                out[i] = part
        return Chain(self.mf, self.parity, out)

    def substitute(self, assignments):
        return Chain(self.mf, self.parity,
                     {i: p.substitute(assignments)
                      for i, p in self.comps.items()})

    def __repr__(self):
        gens = self.mf.gens[self.parity]
        if not self.comps:
            return "0"
        return " + ".join("(%s)*%r" % (p, gens[i])
                          for i, p in sorted(self.comps.items()))


class MatrixFactorization:
    """gens[0], gens[1] plus sparse differentials d[0]: M^0->M^1, d[1]: M^1->M^0."""

    def __init__(self, field, n, variables, gens0, gens1, d0, d1, w,
                 rows=None, check=True):
        self.field = field
        self.n = n
        self.variables = tuple(variables)
        self.gens = (list(gens0), list(gens1))
        self.d = (d0, d1)  # d[p]: {(target_index, source_index): Poly}
        self.w = w
        self.rows = rows  # tuple of KoszulRow when of Koszul type
        self.index = ({g.label: i for i, g in enumerate(gens0)},
                      {g.label: i for i, g in enumerate(gens1)})
        if check:
            self.verify()

    # -- basic checks --------------------------------------------------------

    def verify(self, strict_degree=False):
        """d1 d0 = d0 d1 = w id, filtration bound on entries, deg w <= 2n+2."""
        if self.w.degree() > 2 * self.n + 2:
            raise ValueError("potential degree exceeds 2n+2")
        for p in (0, 1):
            comp = self._compose(self.d[1 - p], self.d[p], p)
            m = len(self.gens[p])
            for i in range(m):
                for j in range(m):
                    expect = self.w if i == j else Poly.zero(self.field)
                    got = comp.get((i, j), Poly.zero(self.field))
                    if got != expect:
                        raise ValueError("d^2 != w id at parity %d (%d,%d)" % (p, i, j))
            bound = self.n + 1
            for (i, j), poly in self.d[p].items():
                src = self.gens[p][j]
                tgt = self.gens[1 - p][i]
                if poly and poly.degree() + tgt.shift - src.shift > bound:
                    if strict_degree:
                        raise NotFiltered("differential entry exceeds F^{n+1}")
        return True

    def _compose(self, dA, dB, src_parity):
        """Matrix product dA @ dB where dB starts at parity src_parity."""
        out = {}
        by_col = {}
        for (i, j), p in dA.items():
            by_col.setdefault(j, []).append((i, p))
        for (k, j), q in dB.items():
            for (i, p) in by_col.get(k, ()):  # k = intermediate index
                key = (i, j)
                s = out.get(key)
                pq = p * q
                out[key] = pq if s is None else s + pq
        return {k: v for k, v in out.items() if v}

    def rank(self):
        return len(self.gens[0]) + len(self.gens[1])

    # -- chains --------------------------------------------------------------

    def zero_chain(self, parity):
        return Chain(self, parity)

    def gen_chain(self, parity, index, poly=None):
        return Chain(self, parity,
                     {index: poly if poly is not None
                      else Poly.const(1, self.field)})

    def apply_d(self, chain):
        dmat = self.d[chain.parity]
        out = {}
        by_col = {}
        for (i, j), p in dmat.items():
            by_col.setdefault(j, []).append((i, p))
        for j, q in chain.comps.items():
            for i, p in by_col.get(j, ()):
                s = out.get(i)
                pq = p * q
                out[i] = pq if s is None else s + pq
        return Chain(self, 1 - chain.parity, out)

    def to_text(self):
        lines = ["variables: %s" % " ".join(self.variables),
                 "potential: %s" % self.w, "n: %d" % self.n]
        if self.rows is not None:
            for r in self.rows:
                lines.append("row: %s | %s" % (r.a, r.b))
        else:
            for p in (0, 1):
                for i, g in enumerate(self.gens[p]):
                    lines.append("gen%d[%d]: shift %d label %r" % (p, i, g.shift, g.label))
                for (i, j) in sorted(self.d[p]):
                    lines.append("d%d[%d,%d]: %s" % (p, i, j, self.d[p][(i, j)]))
        return "\n".join(lines)


# -- Koszul construction -----------------------------------------------------


def koszul(rows, n, field=QQ, extra_shift=0, check=True):
    """Tensor of the rows (a_i, b_i); (a,b) = R --a--> R{n+1-deg a} --b--> R."""
    rows = tuple(rows)
    for r in rows:
        if check:
            r.check_degree(n)
    k = len(rows)
    variables = set()
    w = Poly.zero(field) if not rows else None
    for r in rows:
        variables |= r.a.variables() | r.b.variables()
        w = r.a * r.b if w is None else w + r.a * r.b
    if w is None:
        w = Poly.zero(field)
    theta_shift = [n + 1 - r.a.degree() for r in rows]

    gens = ([], [])
    for code in range(2 ** k):
        bits = tuple((code >> i) & 1 for i in range(k))
        parity = sum(bits) % 2
        shift = extra_shift + sum(theta_shift[i] for i in range(k) if bits[i])
        gens[parity].append(GradedGen(parity, shift, bits))
    index = ({g.label: i for i, g in enumerate(gens[0])},
             {g.label: i for i, g in enumerate(gens[1])})

    d0, d1 = {}, {}
    for parity, dmat in ((0, d0), (1, d1)):
        for j, g in enumerate(gens[parity]):
            bits = g.label
            for slot in range(k):
                sign = (-1) ** sum(bits[slot + 1:])
                entry = rows[slot].a if bits[slot] == 0 else rows[slot].b
                if not entry:
                    continue
                tbits = bits[:slot] + (1 - bits[slot],) + bits[slot + 1:]
                i = index[1 - parity][tbits]
                poly = entry if sign > 0 else -entry
                key = (i, j)
                prev = dmat.get(key)
                dmat[key] = poly if prev is None else prev + poly

    mf = MatrixFactorization(field, n, sorted(variables), gens[0], gens[1],
                             d0, d1, w, rows=rows, check=check)
    return mf


def _relabel(label, tag):
    return (tag, label)


def tensor(M, N, check=True):
    """M (x) N with d(m@n) = (-1)^{|n|} (dm)@n + m@(dn)."""
    assert M.field is N.field
    field = M.field
    n = max(M.n, N.n)
    gens = ([], [])
    # block ordering (0,0),(1,1) / (1,0),(0,1) matches the paper's presentation
    order = {0: [(0, 0), (1, 1)], 1: [(1, 0), (0, 1)]}
    for parity in (0, 1):
        for (pm, pn) in order[parity]:
            for gm in M.gens[pm]:
                for gn in N.gens[pn]:
                    gens[parity].append(GradedGen(
                        parity, gm.shift + gn.shift, (gm.label, gn.label)))
    index = ({g.label: i for i, g in enumerate(gens[0])},
             {g.label: i for i, g in enumerate(gens[1])})

    d0, d1 = {}, {}
    for parity, dmat in ((0, d0), (1, d1)):
        for (pm, pn) in order[parity]:
            for jm, gm in enumerate(M.gens[pm]):
                for jn, gn in enumerate(N.gens[pn]):
                    j = index[parity][(gm.label, gn.label)]
                    sign = (-1) ** pn
                    for (im, jm2), poly in M.d[pm].items():
                        if jm2 != jm:
                            continue
                        tlabel = (M.gens[1 - pm][im].label, gn.label)
                        i = index[1 - parity][tlabel]
                        q = poly if sign > 0 else -poly
                        prev = dmat.get((i, j))
                        dmat[(i, j)] = q if prev is None else prev + q
                    for (in_, jn2), poly in N.d[pn].items():
                        if jn2 != jn:
                            continue
                        tlabel = (gm.label, N.gens[1 - pn][in_].label)
                        i = index[1 - parity][tlabel]
                        prev = dmat.get((i, j))
                        dmat[(i, j)] = poly if prev is None else prev + poly

    variables = sorted(set(M.variables) | set(N.variables))
    mf = MatrixFactorization(field, n, variables, gens[0], gens[1], d0, d1,
                             M.w + N.w, rows=None, check=check)
    mf.tensor_factors = (M, N)
    return mf


# -- shifts, duals, sign flips ------------------------------------------------


def shift_brace(M, k):
    """M{k}: add k to every generator's quantum shift."""
    gens0 = [GradedGen(g.parity, g.shift + k, g.label) for g in M.gens[0]]
    gens1 = [GradedGen(g.parity, g.shift + k, g.label) for g in M.gens[1]]
    mf = MatrixFactorization(M.field, M.n, M.variables, gens0, gens1,
                             dict(M.d[0]), dict(M.d[1]), M.w,
                             rows=M.rows, check=False)
    return mf


def shift_angle(M):
    """M<1>: swap parities, negate both differentials; potential unchanged."""
    gens0 = [GradedGen(0, g.shift, g.label) for g in M.gens[1]]
    gens1 = [GradedGen(1, g.shift, g.label) for g in M.gens[0]]
    d0 = {k: -p for k, p in M.d[1].items()}
    d1 = {k: -p for k, p in M.d[0].items()}
    return MatrixFactorization(M.field, M.n, M.variables, gens0, gens1,
                               d0, d1, M.w, rows=None, check=False)


def minus(M):
    """M_-: negate d0; potential becomes -w."""
    d0 = {k: -p for k, p in M.d[0].items()}
    return MatrixFactorization(M.field, M.n, M.variables,
                               list(M.gens[0]), list(M.gens[1]),
                               d0, dict(M.d[1]), -M.w, rows=None, check=False)


def dual(M):
    """M*: transposed differentials on dual generators (shifts negate)."""
    gens0 = [GradedGen(0, -g.shift, ("*", g.label)) for g in M.gens[0]]
    gens1 = [GradedGen(1, -g.shift, ("*", g.label)) for g in M.gens[1]]
    # (M*)^0 --(d1)*--> (M*)^1 --(d0)*--> (M*)^0
    d0 = {(j, i): p for (i, j), p in M.d[1].items()}
    d1 = {(j, i): p for (i, j), p in M.d[0].items()}
    return MatrixFactorization(M.field, M.n, M.variables, gens0, gens1,
                               d0, d1, M.w, rows=None, check=False)


def bullet(M):
    """M_bullet = (M*)_-; potential -w."""
    return minus(dual(M))


class ChainMap:
    """Parity-preserving map of matrix factorizations: matrices (f0, f1)."""

    def __init__(self, source, target, f0, f1):
        self.source = source
        self.target = target
        self.f = (f0, f1)  # f[p]: {(target_index, source_index): coeff Poly}

    def apply(self, chain):
        fmat = self.f[chain.parity]
        out = {}
        by_col = {}
        for (i, j), p in fmat.items():
            by_col.setdefault(j, []).append((i, p))
        for j, q in chain.comps.items():
            for i, p in by_col.get(j, ()):
                s = out.get(i)
                pq = p * q
                out[i] = pq if s is None else s + pq
        return Chain(self.target, chain.parity, out)

    def is_chain_map(self):
        for p in (0, 1):
            for j in range(len(self.source.gens[p])):
                c = self.source.gen_chain(p, j)
                lhs = self.apply(self.source.apply_d(c))
                rhs = self.target.apply_d(self.apply(c))
                if (lhs - rhs).comps:
                    return False
        return True

    def degree(self):
        d = NEG_INF
        for p in (0, 1):
            for (i, j), poly in self.f[p].items():
                if poly:
                    src = self.source.gens[p][j]
                    tgt = self.target.gens[p][i]
                    d = max(d, poly.degree() + tgt.shift - src.shift)
        return d

    def compose(self, other):
        """self o other."""
        assert other.target is self.source
        f0 = self.target._compose(self.f[0], other.f[0], 0)
        f1 = self.target._compose(self.f[1], other.f[1], 1)
        return ChainMap(other.source, self.target, f0, f1)


def identity_map(M):
    one = Poly.const(1, M.field)
    f0 = {(i, i): one for i in range(len(M.gens[0]))}
    f1 = {(i, i): one for i in range(len(M.gens[1]))}
    return ChainMap(M, M, f0, f1)


# -- the reduction lemmas ------------------------------------------------------


def scale_differential(M, c):
    """M_c = (c d0, c^-1 d1); witness iso (c^-1 id, id) both ways."""
    if is_zero(c):
        raise ZeroScalar("scalar must be nonzero")
    c = M.field.from_rational(c) if isinstance(c, int) else c
    cinv = 1 / c
    d0 = {k: p.scale(c) for k, p in M.d[0].items()}
    d1 = {k: p.scale(cinv) for k, p in M.d[1].items()}
    Mc = MatrixFactorization(M.field, M.n, M.variables,
                             list(M.gens[0]), list(M.gens[1]),
                             d0, d1, M.w, rows=None, check=False)
    one = Poly.const(1, M.field)
    f0 = {(i, i): Poly.const(cinv, M.field) for i in range(len(M.gens[0]))}
    f1 = {(i, i): one for i in range(len(M.gens[1]))}
    g0 = {(i, i): Poly.const(c, M.field) for i in range(len(M.gens[0]))}
    g1 = {(i, i): one for i in range(len(M.gens[1]))}
    fwd = ChainMap(M, Mc, f0, f1)
    bwd = ChainMap(Mc, M, g0, g1)
    return Mc, fwd, bwd


def _matrix_square_zero(H, size):
    sq = {}
    by_col = {}
    for (i, j), p in H.items():
        by_col.setdefault(j, []).append((i, p))
    for (k, j), q in H.items():
        for i, p in by_col.get(k, ()):
            s = sq.get((i, j))
            pq = p * q
            sq[(i, j)] = pq if s is None else s + pq
    return all(not v for v in sq.values())


def general_twist(M, H0, H1):
    """Conjugate by (id +- H): d~_i = (id - H_{i+1}) d_i (id + H_i).

    H_i are filtered endomorphism matrices of M^i with H_i^2 = 0.  Returns
    (M~, forward, backward) where forward = (id - H) and backward = (id + H).
    """
    for p, H in ((0, H0), (1, H1)):
        if not _matrix_square_zero(H, len(M.gens[p])):
            raise NotSquareZero("H%d squared is nonzero" % p)
        for (i, j), poly in H.items():
            if poly and poly.degree() + M.gens[p][i].shift - M.gens[p][j].shift > 0:
                raise NotFiltered("H%d raises the filtration" % p)

    one = Poly.const(1, M.field)

    def plus_minus(H, size, sign):
        out = {(i, i): one for i in range(size)}
        for (i, j), p in H.items():
            q = p if sign > 0 else -p
            prev = out.get((i, j))
            out[(i, j)] = q if prev is None else prev + q
        return {k: v for k, v in out.items() if v}

    n0, n1 = len(M.gens[0]), len(M.gens[1])
    iplus0 = plus_minus(H0, n0, +1)
    iminus0 = plus_minus(H0, n0, -1)
    iplus1 = plus_minus(H1, n1, +1)
    iminus1 = plus_minus(H1, n1, -1)
    d0 = M._compose(M._compose(iminus1, M.d[0], 0), iplus0, 0)
    d1 = M._compose(M._compose(iminus0, M.d[1], 1), iplus1, 1)
    Mt = MatrixFactorization(M.field, M.n, M.variables,
                             list(M.gens[0]), list(M.gens[1]),
                             d0, d1, M.w, rows=None, check=False)
    fwd = ChainMap(M, Mt, iminus0, iminus1)
    bwd = ChainMap(Mt, M, iplus0, iplus1)
    return Mt, fwd, bwd


def _extra_shift(M):
    """Global {k} shift of a Koszul factorization (shift of the 1...1 slot)."""
    zero_bits = tuple(0 for _ in M.rows)
    return M.gens[0][M.index[0][zero_bits]].shift


def _two_row_koszul(M):
    if M.rows is None or len(M.rows) != 2:
        raise ValueError("operation requires a two-row Koszul factorization")
    return M.rows


def twist(M, k):
    """Rows (a1,b1),(a2,b2) -> (a1 + k b2, b1), (a2 - k b1, b2)."""
    (r1, r2) = _two_row_koszul(M)
    if k and k.degree() > r1.a.degree() + r2.a.degree() - 2 * M.n - 2:
        raise DegreeBoundViolated("deg k > deg a1 + deg a2 - 2n - 2")
    new = koszul([KoszulRow(r1.a + k * r2.b, r1.b),
                  KoszulRow(r2.a - k * r1.b, r2.b)], M.n, M.field,
                 extra_shift=_extra_shift(M), check=False)
    # witness via Lemma general-twist with H0 = [[0,0],[k,0]], H1 = 0
    H0 = {(1, 0): k} if k else {}
    Mt, fwd, bwd = general_twist(M, H0, {})
    fwd = ChainMap(M, new, fwd.f[0], fwd.f[1])
    bwd = ChainMap(new, M, bwd.f[0], bwd.f[1])
    return new, fwd, bwd


def row_operation(M, c):
    """Rows (a1,b1),(a2,b2) -> (a1 + c a2, b1), (a2, b2 - c b1)."""
    (r1, r2) = _two_row_koszul(M)
    if c and c.degree() > r1.a.degree() - r2.a.degree():
        raise DegreeBoundViolated("deg c > deg a1 - deg a2")
    new = koszul([KoszulRow(r1.a + c * r2.a, r1.b),
                  KoszulRow(r2.a, r2.b - c * r1.b)], M.n, M.field,
                 extra_shift=_extra_shift(M), check=False)
    H1 = {(0, 1): -c} if c else {}
    Mt, fwd, bwd = general_twist(M, {}, H1)
    fwd = ChainMap(M, new, fwd.f[0], fwd.f[1])
    bwd = ChainMap(new, M, bwd.f[0], bwd.f[1])
    return new, fwd, bwd


# -- variable exclusion --------------------------------------------------------


class ExclusionWitness:
    """One variable-exclusion step: row i with b = c(x_t - f) removed.

    project: chain map M -> M' (substitute x_t := f, kill theta_i slots).
    include_cocycle: section of project on cocycles, alpha -> beta - h(d beta);
    it is filtered and produces genuine cocycles of M when w = 0.
    """

    def __init__(self, source, target, row_index, var, f_poly, b_poly):
        self.source = source
        self.target = target
        self.row_index = row_index
        self.var = var
        self.f_poly = f_poly
        self.b_poly = b_poly

    def project(self, chain):
        i = self.row_index
        out = {}
        sub = {self.var: self.f_poly}
        tgt_index = self.target.index
        for j, p in chain.comps.items():
            bits = self.source.gens[chain.parity][j].label
            if bits[i] == 1:
                continue
            nbits = bits[:i] + bits[i + 1:]
            q = p.substitute(sub)
            if q:
                out[tgt_index[chain.parity][nbits]] = q
        return Chain(self.target, chain.parity, out)

    def include_cocycle(self, chain):
        """Lift a cocycle of M' to a cocycle of M of the same filtration."""
        i = self.row_index
        src_index = self.source.index
        beta = {}
        for j, p in chain.comps.items():
            bits = self.target.gens[chain.parity][j].label
            nbits = bits[:i] + (0,) + bits[i:]
            beta[src_index[chain.parity][nbits]] = p
        beta = Chain(self.source, chain.parity, beta)
        dbeta = self.source.apply_d(beta)
        # h kills the theta_i part and maps b*r (1_i slot) to +- r (theta_i slot)
        corr = {}
        for j, p in dbeta.comps.items():
            bits = self.source.gens[dbeta.parity][j].label
            if bits[i] == 1:
                continue
            r = divide_exact(p, self.b_poly)
            sign = (-1) ** sum(bits[i + 1:])
            tbits = bits[:i] + (1,) + bits[i + 1:]
            tj = src_index[beta.parity][tbits]
            q = r if sign > 0 else -r
            prev = corr.get(tj)
            corr[tj] = q if prev is None else prev + q
        return beta - Chain(self.source, beta.parity, corr)


def exclude_variable(M, row_index, var=None):
    """Remove Koszul row i whose b is (up to a unit) x_t - f, substituting x_t.

    Returns (M', witness).  Requires deg a + deg b = 2n + 2 so that the
    witness maps are filtered (Proposition-level hypothesis).
    """
    if M.rows is None:
        raise NotSubstitutable("factorization carries no Koszul rows")
    rows = M.rows
    row = rows[row_index]
    b = row.b
    candidates = []
    for v in sorted(b.variables()):
        if b.max_exponent(v) == 1:
            coef = b.coefficient(v, 1)
            if coef.is_constant() and coef:
                candidates.append((v, coef.constant_term()))
    if var is not None:
        candidates = [c for c in candidates if c[0] == var]
    if not candidates:
        raise NotSubstitutable("b is not linear-solvable: %s" % b)
    v, c = candidates[0]
    if row.a.degree() + b.degree() != 2 * M.n + 2:
        raise DegreeMismatch("deg a + deg b != 2n+2 for excluded row")
    # b = c*x_v + rest, so x_v = x_v - b/c on the quotient
    f = Poly.var(v, M.field) - b.scale(1 / c)
    assert v not in f.variables()
    sub = {v: f}
    new_rows = [KoszulRow(r.a.substitute(sub), r.b.substitute(sub))
                for k, r in enumerate(rows) if k != row_index]
    extra = _extra_shift(M)
    target = koszul(new_rows, M.n, M.field, extra_shift=extra, check=False)
    witness = ExclusionWitness(M, target, row_index, v, f, b)
    return target, witness


class ReductionPath:
    """Composite of exclusion steps from a full factorization to its core."""

    def __init__(self, source, steps):
        self.source = source
        self.steps = steps
        self.target = steps[-1].target if steps else source

    def project(self, chain):
        for s in self.steps:
            chain = s.project(chain)
        return chain

    def include_cocycle(self, chain):
        for s in reversed(self.steps):
            chain = s.include_cocycle(chain)
        return chain


def reduce_linear_rows(M, protect=()):
    """Exclude every linear-substitutable row (deg a + deg b = 2n+2).

    ``protect`` is a set of variables that must not be substituted away
    (e.g. markings needed by a chain map about to be transported).
    """
    steps = []
    current = M
    while current.rows:
        progressed = False
        for idx, row in enumerate(current.rows):
            b = row.b
            if not b or row.a.degree() + b.degree() != 2 * current.n + 2:
                continue
            ok_var = None
            for v in sorted(b.variables()):
                if v in protect:
                    continue
                if b.max_exponent(v) == 1:
                    coef = b.coefficient(v, 1)
                    if coef.is_constant() and coef:
                        ok_var = v
                        break
            if ok_var is None:
                continue
            current, wit = exclude_variable(current, idx, var=ok_var)
            steps.append(wit)
            progressed = True
            break
        if not progressed:
            break
    return current, ReductionPath(M, steps)


def hom_mf(M, N):
    """Hom(M, N) as the 0-potential factorization N (x) M_bullet."""
    if M.w != N.w:
        raise PotentialMismatch("hom_mf requires equal potentials")
    return tensor(N, bullet(M))
