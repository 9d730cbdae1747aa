"""Graph cobordism chain maps: circle creation/annihilation, saddles, xi.

All maps are local: they act on a two-row Koszul site inside a larger
factorization (identity on all other rows), or append/remove a circle row.
Even (parity-preserving) site maps carry no Koszul signs; odd site maps pick
up the sign (-1)^(number of set bits in the slots left of the site), which
is what makes them commute with the ambient differential.

Matrix conventions follow the two-row presentation: parity-0 block basis
((0,0), (1,1)), parity-1 block basis ((1,0), (0,1)).
"""

from __future__ import annotations

from .fields import is_zero
from .linalg import Echelon
from .mf import Chain
from .poly import Poly


class NoCircle(ValueError):
    pass


class IncompatibleOrientation(ValueError):
    pass


_BASIS0 = [(0, 0), (1, 1)]
_BASIS1 = [(1, 0), (0, 1)]


def apply_site_map(chain, target_mf, slots, mat_even, mat_odd, odd=False):
    """Apply a two-row-site chain map, identity on the other rows.

    ``slots`` are the two adjacent Koszul row indices of the site (the same
    in source and target).  ``mat_even`` maps the site's parity-0 block,
    ``mat_odd`` its parity-1 block; with ``odd`` set the map flips the block
    parity (target block bases swap) and the left-bits Koszul sign applies.
    """
    r1, r2 = slots
    assert r2 == r1 + 1, "site rows must be adjacent"
    src_gens = chain.mf.gens[chain.parity]
    tparity = (chain.parity + 1) % 2 if odd else chain.parity
    tgt_index = target_mf.index[tparity]
    out = {}
    for gi, poly in chain.comps.items():
        bits = src_gens[gi].label
        block = (bits[r1], bits[r2])
        if block in _BASIS0:
            basis, mat = _BASIS0, mat_even
            tbasis = _BASIS1 if odd else _BASIS0
        else:
            basis, mat = _BASIS1, mat_odd
            tbasis = _BASIS0 if odd else _BASIS1
        col = basis.index(block)
        sign = 1
        if odd and sum(bits[:r1]) % 2:
            sign = -1
        for (row, col2), entry in mat.items():
            if col2 != col or not entry:
                continue
            nb = tbasis[row]
            nbits = list(bits)
            nbits[r1], nbits[r2] = nb
            tj = tgt_index[tuple(nbits)]
            q = poly * entry if sign > 0 else -(poly * entry)
            prev = out.get(tj)
            out[tj] = q if prev is None else prev + q
    return Chain(target_mf, tparity, out)


def append_circle(chain, target_mf, slot, theta=True, sign_rule=True):
    """Tensor a chain with the generator of a circle row appended at ``slot``.

    With ``theta`` the circle bit is set (the Z2-degree-1 generator); this is
    the chain-level circle creation.  The appended generator is odd, so the
    left-bits sign applies when the row is not appended last.
    """
    src_gens = chain.mf.gens[chain.parity]
    bit = 1 if theta else 0
    tparity = (chain.parity + bit) % 2
    tgt_index = target_mf.index[tparity]
    out = {}
    for gi, poly in chain.comps.items():
        bits = src_gens[gi].label
        nbits = bits[:slot] + (bit,) + bits[slot:]
        sign = 1
        if theta and sign_rule and sum(bits[:slot]) % 2:
            sign = -1
        q = poly if sign > 0 else -poly
        tj = tgt_index[nbits]
        prev = out.get(tj)
        out[tj] = q if prev is None else prev + q
    return Chain(target_mf, tparity, out)


# -- eta: the saddle ------------------------------------------------------------


def eta_matrices(potential, field, x1, x2, x3, x4):
    """Block matrices of the saddle map between

        source rows (pi_14, x1-x4), (pi_23, x3-x2)    [arcs x4->x1, x2->x3]
        target rows (pi_12, x1-x2), (pi_34, x3-x4)    [arcs x2->x1, x4->x3]

    The map is parity-odd (it lands in the angle-shifted factorization) of
    quantum degree n-1.  Repeated markings are handled by specialization.
    """
    key = ("eta_site", field.name)
    cache = potential._cache.setdefault(key, {})
    if "base" not in cache:
        a, b, c, d = "@a", "@b", "@c", "@d"  # play x1, x2, x3, x4
        e = potential.e3
        e123 = e(a, b, c, field)
        e124 = e(a, b, d, field)
        e134 = e(a, c, d, field)
        e234 = e(b, c, d, field)
        one = Poly.const(1, field)
        E_even = {(0, 0): e123 + e124, (0, 1): one,
                  (1, 0): -(e134 + e234), (1, 1): one}
        E_odd = {(0, 0): -one, (0, 1): one,
                 (1, 0): -(e123 + e234), (1, 1): -(e134 + e124)}
        cache["base"] = (E_even, E_odd)
    E_even, E_odd = cache["base"]
    sub = {"@a": Poly.var(x1, field), "@b": Poly.var(x2, field),
           "@c": Poly.var(x3, field), "@d": Poly.var(x4, field)}

    def specialize(mat):
        return {k: v.substitute(sub) for k, v in mat.items()}

    return specialize(E_even), specialize(E_odd)


def eta_source_rows(potential, field, x1, x2, x3, x4):
    from .mf import KoszulRow
    return [KoszulRow(potential.pi(x1, x4, field),
                      Poly.var(x1, field) - Poly.var(x4, field)),
            KoszulRow(potential.pi(x2, x3, field),
                      Poly.var(x3, field) - Poly.var(x2, field))]


def eta_target_rows(potential, field, x1, x2, x3, x4):
    from .mf import KoszulRow
    return [KoszulRow(potential.pi(x1, x2, field),
                      Poly.var(x1, field) - Poly.var(x2, field)),
            KoszulRow(potential.pi(x3, x4, field),
                      Poly.var(x3, field) - Poly.var(x4, field))]


# -- xi: virtual crossing <-> wide edge ------------------------------------------


def xi_matrices(potential, field, i, j, k, l, direction):
    """xi_0 (virtual crossing -> wide edge) or xi_1 (back); parity-even.

    The virtual-crossing factorization has rows (pi_il, x_i-x_l),
    (pi_jk, x_j-x_k); composites satisfy xi_1 xi_0 = (x_l - x_j) id.
    """
    key = ("xi_site", field.name)
    cache = potential._cache.setdefault(key, {})
    if "base" not in cache:
        a, b, c, d = "@a", "@b", "@c", "@d"
        pa, pd = Poly.var(a, field), Poly.var(d, field)
        u, v = potential.uv(a, b, c, d, field)
        pjk = potential.pi(b, c, field)
        a1 = -v + (u + pa * v - pjk).divide_exact(pa - pd)
        cache["base"] = a1
    a1 = cache["base"]
    sub = {"@a": Poly.var(i, field), "@b": Poly.var(j, field),
           "@c": Poly.var(k, field), "@d": Poly.var(l, field)}
    a1 = a1.substitute(sub)
    xl = Poly.var(l, field)
    xj = Poly.var(j, field)
    one = Poly.const(1, field)
    if direction == 0:
        U0 = {(0, 0): xl - xj, (1, 0): a1, (1, 1): one}
        U1 = {(0, 0): xl, (0, 1): -xj, (1, 0): -one, (1, 1): one}
        return U0, U1
    V0 = {(0, 0): one, (1, 0): -a1, (1, 1): xl - xj}
    V1 = {(0, 0): one, (0, 1): xj, (1, 0): one, (1, 1): xl}
    return V0, V1


def xi_source_rows(potential, field, i, j, k, l):
    """Rows of the virtual-crossing factorization (strands i<-l and j<-k)."""
    from .mf import KoszulRow
    return [KoszulRow(potential.pi(i, l, field),
                      Poly.var(i, field) - Poly.var(l, field)),
            KoszulRow(potential.pi(j, k, field),
                      Poly.var(j, field) - Poly.var(k, field))]


def wide_rows(potential, field, i, j, k, l):
    from .mf import KoszulRow
    u, v = potential.uv(i, j, k, l, field)
    b1 = (Poly.var(i, field) + Poly.var(j, field)
          - Poly.var(k, field) - Poly.var(l, field))
    b2 = (Poly.var(i, field) * Poly.var(j, field)
          - Poly.var(k, field) * Poly.var(l, field))
    return [KoszulRow(u, b1), KoszulRow(v, b2)]


# -- iota / epsilon on circle factors ----------------------------------------------


class CirclePair:
    """iota/epsilon between models differing by one free-circle row.

    ``with_model`` is the MFModel whose full factorization carries the
    circle row (p'(y), 0) at ``slot``; ``without_model`` is the same
    factorization with that row removed.  iota is degree 1-n (the class of
    theta has level 1-n); epsilon projects onto the [y^{n-1} theta]
    coordinate of the Kunneth basis, also degree 1-n.
    """

    def __init__(self, with_model, without_model, circle_var, slot, n):
        self.w = with_model
        self.wo = without_model
        self.y = circle_var
        self.slot = slot
        self.n = n
        self.field = with_model.field
        self._kunneth = None

    def iota_chain(self, full_chain_without):
        return append_circle(full_chain_without, self.w.full, self.slot)

    def iota(self, class_index):
        """Class coordinates of iota(class) in the with-circle model."""
        z = self.wo.lift_full(class_index)
        return self.w.reduce_full(self.iota_chain(z))

    def _kunneth_matrix(self):
        """Coordinates of the product classes [y^k theta x w_j]."""
        if self._kunneth is not None:
            return self._kunneth
        from .linalg import Echelon
        y = Poly.var(self.y, self.field)
        table = {}
        for j in range(self.wo.dim):
            base = self.iota_chain(self.wo.lift_full(j))
            for k in range(self.n):
                coeffs = self.w.reduce_full(base.times_poly(y ** k))
                table[(k, j)] = coeffs
        self._kunneth = table
        return table

    def epsilon(self, coeffs_with):
        """Coordinates in the without-circle model of epsilon(class).

        ``coeffs_with``: {class_index: coeff} in the with-circle model.
        """
        table = self._kunneth_matrix()
        keys = sorted(table)
        # solve sum_a x_a table[a] = coeffs_with
        from .linalg import Echelon
        ech = Echelon()
        for a in keys:
            ech.add(dict(table[a]), {a: self.field.one})
        combo, ok = ech.solve(dict(coeffs_with))
        if not ok:
            raise ValueError("class not in the Kunneth span")
        out = {}
        for (k, j), c in combo.items():
            if k == self.n - 1 and not is_zero(c):
                out[j] = out.get(j, self.field.zero) + c
        return {k: v for k, v in out.items() if not is_zero(v)}



# -- MOY decomposition I witnesses ---------------------------------------------------


class Moy1Decomposition:
    """Witness maps alpha_i, beta_i of the first MOY decomposition.

    Gamma_1 is a closed graph with a designated regular edge; Gamma is the
    same graph with a wide edge inserted on that edge whose other strand
    closes into a loop (the reduction-I configuration), and Gamma_2 is
    Gamma_1 with a disjoint circle.  alpha = chi_0 after circle creation,
    beta = circle annihilation after chi_1; the corrected maps satisfy
    beta_j alpha_i = lambda (n+1) delta_{ij}.
    """

    def __init__(self, graph, edge, potential, field=None):
        from .cohomology import MFModel
        from .cube import chi_matrices
        from .graphs import PlanarGraph, build_cp
        from .laurent import Laurent
        from .mf import KoszulRow, koszul
        from .moy import moy_dimension, Irreducible

        self.potential = potential
        self.n = potential.n
        field = field or potential.base_field()
        self.field = field
        extra = dict(graph.extra_markings)
        extra[edge] = extra.get(edge, 1) + 1
        g_sub = PlanarGraph(graph.wides, graph.triples, graph.circles, extra)
        build = build_cp(g_sub, potential, field)
        ms = g_sub.markings(edge)
        x_low, x_up = ms[-2], ms[-1]
        site_key = ("arc", x_up, x_low)
        site_idx = build.row_map[site_key]
        rows = list(build.mf.rows)
        arc_row = rows.pop(site_idx)
        base = rows
        self.x_low, self.x_up = x_low, x_up
        self.y = "ymoy1"
        base_shift = -len(graph.wides) - 3 * len(graph.triples)
        circle_row = KoszulRow(potential.derivative_at(self.y, field),
                               Poly.zero(field))
        u, v = potential.uv(x_up, self.y, x_low, self.y, field)
        b1 = (Poly.var(x_up, field) + Poly.var(self.y, field)
              - Poly.var(x_low, field) - Poly.var(self.y, field))
        b2 = (Poly.var(x_up, field) * Poly.var(self.y, field)
              - Poly.var(x_low, field) * Poly.var(self.y, field))
        try:
            cert1 = moy_dimension(graph, self.n)
        except Irreducible:
            cert1 = None
        qi = Laurent.quantum_integer
        self.m1 = MFModel(koszul(base + [arc_row], self.n, field,
                                 extra_shift=base_shift, check=False),
                          certificate=cert1)
        self.m2 = MFModel(koszul(base + [arc_row, circle_row], self.n, field,
                                 extra_shift=base_shift, check=False),
                          certificate=None if cert1 is None
                          else cert1 * qi(self.n))
        self.mG = MFModel(koszul(base + [KoszulRow(u, b1), KoszulRow(v, b2)],
                                 self.n, field,
                                 extra_shift=base_shift - 1, check=False),
                          certificate=None if cert1 is None
                          else cert1 * qi(self.n - 1))
        self.slots = (len(base), len(base) + 1)
        self.circle_slot = len(base) + 1
        self.U = chi_matrices(potential, field, x_up, self.y, x_low, self.y, 0)
        self.V = chi_matrices(potential, field, x_up, self.y, x_low, self.y, 1)
        self.pair = CirclePair(self.m2, self.m1, self.y,
                               self.circle_slot, self.n)

    # class-level primitives ------------------------------------------------

    def alpha(self, j):
        """chi_0(iota(class j of Gamma_1)) as Gamma-class coordinates."""
        chain = self.pair.iota_chain(self.m1.lift_full(j))
        moved = apply_site_map(chain, self.mG.full, self.slots, *self.U)
        return self.mG.reduce_full(moved)

    def beta(self, coeffs_on_G):
        """epsilon(chi_1(class)) as Gamma_1-class coordinates."""
        total = {}
        for gidx, c in coeffs_on_G.items():
            chain = self.mG.lift_full(gidx)
            moved = apply_site_map(chain, self.m2.full, self.slots, *self.V)
            for ci, cc in self.m2.reduce_full(moved).items():
                s = total.get(ci, self.field.zero) + c * cc
                if is_zero(s):
                    total.pop(ci, None)
                else:
                    total[ci] = s
        return self.pair.epsilon(total)

    def multiply_on_G(self, coeffs, poly):
        total = {}
        for gidx, c in coeffs.items():
            chain = self.mG.classes[gidx].rep.times_poly(poly)
            for ci, cc in self.mG.H.reduce(chain).items():
                s = total.get(ci, self.field.zero) + c * cc
                if is_zero(s):
                    total.pop(ci, None)
                else:
                    total[ci] = s
        return total

    def alpha_i(self, i, j):
        """alpha_i applied to class j of Gamma_1, as Gamma coordinates."""
        n = self.n
        p = self.potential
        base = self.alpha(j)
        x1 = Poly.var(self.x_up, self.field)
        x3 = Poly.var(self.y, self.field)
        total = {}
        for k in range(i + 1):
            ck = self.field.from_rational(1) if k == 0 else                 self.field.from_rational(p.coeffs.get(n - k + 1, 0))
            if is_zero(ck):
                continue
            scal = (n - k + 1) * ck
            for l in range(i - k + 1):
                mono = (x1 ** (i - l - k)) * (x3 ** l)
                part = self.multiply_on_G(base, mono.scale(scal))
                for ci, cc in part.items():
                    s = total.get(ci, self.field.zero) + cc
                    if is_zero(s):
                        total.pop(ci, None)
                    else:
                        total[ci] = s
        return total

    def beta_i(self, i, coeffs_on_G):
        n = self.n
        x3 = Poly.var(self.y, self.field)
        shifted = self.multiply_on_G(coeffs_on_G, x3 ** (n - i - 2))
        out = self.beta(shifted)
        return {k: -v for k, v in out.items()}

    def pairing(self):
        """Matrix beta_j(alpha_i(classes)): delta_{ij} lambda (n+1) id."""
        n = self.n
        out = {}
        for i in range(n - 1):
            for j0 in range(self.m1.dim):
                av = self.alpha_i(i, j0)
                for jj in range(n - 1):
                    bv = self.beta_i(jj, av)
                    out[(i, jj, j0)] = bv
        return out



class GammaHatBasis:
    """The monomial basis x1^i x2^j x3^eps of the double-wide-edge graph.

    Exposes iota~ (the lowest class) and epsilon~ (the coordinate of the top
    basis element x1^{n-1} x2^{n-2} x3), both of degree 2-2n.
    """

    def __init__(self, potential, field=None):
        from .cohomology import MFModel
        from .laurent import Laurent
        from .mf import KoszulRow, koszul
        n = potential.n
        field = field or potential.base_field()
        self.n = n
        self.field = field
        u1, v1 = potential.uv("x1", "x2", "x3", "x4", field)
        u2, v2 = potential.uv("x3", "x4", "x1", "x2", field)
        xs = {i: Poly.var("x%d" % i, field) for i in (1, 2, 3, 4)}
        rows = [KoszulRow(u1, xs[1] + xs[2] - xs[3] - xs[4]),
                KoszulRow(v1, xs[1] * xs[2] - xs[3] * xs[4]),
                KoszulRow(u2, xs[3] + xs[4] - xs[1] - xs[2]),
                KoszulRow(v2, xs[3] * xs[4] - xs[1] * xs[2])]
        qi = Laurent.quantum_integer
        self.model = MFModel(koszul(rows, n, field, extra_shift=-2,
                                    check=False),
                             certificate=qi(2) * qi(n) * qi(n - 1))
        # the lowest class is unique; its lift generates over the markings
        bottom = [c for c in self.model.classes if c.level == 2 - 2 * n]
        assert len(bottom) == 1
        self.bottom = bottom[0]
        self._gen_full = self.model.lift_full(self.bottom.index)
        self._matrix = None

    def monomial_class(self, i, j, eps):
        """Coordinates of [x1^i x2^j x3^eps] in the computed basis."""
        poly = (Poly.var("x1", self.field) ** i) *                (Poly.var("x2", self.field) ** j) *                (Poly.var("x3", self.field) ** eps)
        return self.model.reduce_full(self._gen_full.times_poly(poly))

    def _basis_matrix(self):
        if self._matrix is None:
            table = {}
            for i in range(self.n):
                for j in range(self.n - 1):
                    for eps in (0, 1):
                        table[(i, j, eps)] = self.monomial_class(i, j, eps)
            self._matrix = table
        return self._matrix

    def iota_tilde(self):
        """Class coordinates of the image of 1 (the lowest filtration)."""
        return {self.bottom.index: self.field.one}

    def epsilon_tilde(self, coeffs):
        """Coordinate of x1^{n-1} x2^{n-2} x3 in the monomial basis."""
        table = self._basis_matrix()
        keys = sorted(table)
        ech = Echelon()
        for a in keys:
            ech.add(dict(table[a]), {a: self.field.one})
        combo, ok = ech.solve(dict(coeffs))
        if not ok:
            raise ValueError("class outside the monomial basis span")
        return combo.get((self.n - 1, self.n - 2, 1), self.field.zero)

    def class_of_poly(self, poly):
        """Class of poly * (bottom generator) for a marking polynomial."""
        return self.model.reduce_full(self._gen_full.times_poly(poly))
