"""The cube of resolutions and the link cohomology H_p(D).

Every crossing is resolved into the oriented smoothing (bit 0) or the wide
edge (bit 1).  A vertex carries the Koszul factorization of its resolution
graph, with the crossing-local quantum shifts baked in:

    positive:  C_p(Gamma_1){n} at cohdeg -1  --chi_1-->  C_p(Gamma_0){n-1} at 0
    negative:  C_p(Gamma_0){1-n} at cohdeg 0 --chi_0-->  C_p(Gamma_1){-n} at 1

The vertexwise cohomologies with the induced chi maps form a finite filtered
cochain complex (H(C_p(D), d_mf), d_chi); its homology is H_p(D) and its
filtration spectral sequence has E_1 = H_n(D).
"""

from __future__ import annotations

import itertools

from .cohomology import MFCohomology
from .fields import is_zero
from .filtration import FilteredComplex
from .graphs import PlanarGraph
from .laurent import Laurent
from .mf import Chain, KoszulRow, koszul, reduce_linear_rows
from .moy import Irreducible, moy_dimension
from .poly import Poly


def arc_var(arc):
    return "x%s" % arc


class VertexData:
    __slots__ = ("bits", "mf", "reduced", "path", "H", "graph", "cohdeg",
                 "shift", "certificate", "row_of_crossing", "row_keys")

    def __init__(self, **kw):
        for k, v in kw.items():
            setattr(self, k, v)


def _site_polys(potential, field, i, j, k, l):
    """u, v, pi_jl, a1 for the chi maps at a crossing with slots (i,j,k,l).

    Everything is computed with four fresh variables and specialized, so
    coinciding markings (kinks) are fine.
    """
    key = ("chi_site", field.name)
    cache = potential._cache.setdefault(key, {})
    if "base" not in cache:
        a, b, c, d = "@a", "@b", "@c", "@d"
        pa, pc = Poly.var(a, field), Poly.var(c, field)
        u, v = potential.uv(a, b, c, d, field)
        pijl = potential.pi(b, d, field)
        num = u + pa * v - pijl
        a1 = -v + num.divide_exact(pa - pc)
        cache["base"] = (u, v, pijl, a1)
    u, v, pijl, a1 = cache["base"]
    sub = {"@a": Poly.var(i, field), "@b": Poly.var(j, field),
           "@c": Poly.var(k, field), "@d": Poly.var(l, field)}
    return (u.substitute(sub), v.substitute(sub),
            pijl.substitute(sub), a1.substitute(sub))


def chi_matrices(potential, field, i, j, k, l, direction):
    """Block matrices of chi_0 (smoothing -> wide) or chi_1 (wide -> smoothing).

    Blocks are 2x2 over the two-row Koszul bases ((0,0),(1,1)) and
    ((1,0),(0,1)); entries are polynomials in the site markings.
    """
    xi = Poly.var(i, field)
    xj = Poly.var(j, field)
    xk = Poly.var(k, field)
    one = Poly.const(1, field)
    _, _, _, a1 = _site_polys(potential, field, i, j, k, l)
    if direction == 0:
        U0 = {(0, 0): xk - xj, (1, 0): a1, (1, 1): one}
        U1 = {(0, 0): xk, (0, 1): -xj, (1, 0): -one, (1, 1): one}
        return U0, U1
    V0 = {(0, 0): one, (1, 0): -a1, (1, 1): xk - xj}
    V1 = {(0, 0): one, (0, 1): xj, (1, 0): one, (1, 1): xk}
    return V0, V1


def apply_block_map(chain, target_mf, slot_pair, B0, B1):
    """Apply a two-row block chain map (identity elsewhere) to a chain.

    ``slot_pair`` gives the two Koszul row indices of the site; B0 acts on
    the block basis ((0,0),(1,1)), B1 on ((1,0),(0,1)).  Because the map
    preserves the block parity, no Leibniz signs appear.
    """
    r1, r2 = slot_pair
    src_gens = chain.mf.gens[chain.parity]
    tgt_index = target_mf.index[chain.parity]
    basis0 = [(0, 0), (1, 1)]
    basis1 = [(1, 0), (0, 1)]
    out = {}
    for gi, poly in chain.comps.items():
        bits = src_gens[gi].label
        block = (bits[r1], bits[r2])
        if block in ((0, 0), (1, 1)):
            basis, mat = basis0, B0
        else:
            basis, mat = basis1, B1
        col = basis.index(block)
        for (row, col2), entry in mat.items():
            if col2 != col or not entry:
                continue
            nb = basis[row]
            nbits = list(bits)
            nbits[r1], nbits[r2] = nb
            tj = tgt_index[tuple(nbits)]
            q = poly * entry
            prev = out.get(tj)
            out[tj] = q if prev is None else prev + q
    return Chain(target_mf, chain.parity, out)


class ResolutionCube:
    """All resolutions of a diagram and the assembled chi complex."""

    def __init__(self, diagram, potential, field=None, engine=None):
        self.diagram = diagram
        self.potential = potential
        self.field = field or potential.base_field()
        self.n = potential.n
        self.engine = engine
        self.vertices = {}
        self._build_vertices()
        self._assemble()

    # -- per-vertex construction ----------------------------------------------

    def _vertex_rows(self, bits):
        p, field = self.potential, self.field
        rows = []
        row_of_crossing = {}
        shift = 0
        for c, x in enumerate(self.diagram.crossings):
            i, j, k, l = (arc_var(a) for a in x.slots())
            row_of_crossing[c] = (len(rows), len(rows) + 1)
            if bits[c] == 0:
                rows.append(KoszulRow(
                    p.pi(i, k, field),
                    Poly.var(i, field) - Poly.var(k, field)))
                rows.append(KoszulRow(
                    p.pi(j, l, field),
                    Poly.var(j, field) - Poly.var(l, field)))
                shift += (self.n - 1) if x.sign > 0 else (1 - self.n)

            else:
                u, v, _, _ = _site_polys(p, field, i, j, k, l)
                b1 = (Poly.var(i, field) + Poly.var(j, field)
                      - Poly.var(k, field) - Poly.var(l, field))
                b2 = (Poly.var(i, field) * Poly.var(j, field)
                      - Poly.var(k, field) * Poly.var(l, field))
                rows.append(KoszulRow(u, b1))
                rows.append(KoszulRow(v, b2))
                shift += self.n if x.sign > 0 else -self.n
        row_keys = []
        for c in range(len(self.diagram.crossings)):
            row_keys += [("crossing", c, 0), ("crossing", c, 1)]
        for (a, b) in self.diagram.joints:
            rows.append(KoszulRow(
                p.pi(arc_var(b), arc_var(a), field),
                Poly.var(arc_var(b), field) - Poly.var(arc_var(a), field)))
            row_keys.append(("joint", a, b))
        for a in self.diagram.free_circles:
            rows.append(KoszulRow(p.derivative_at(arc_var(a), field),
                                  Poly.zero(field)))
            row_keys.append(("circle", a))
        return rows, row_of_crossing, shift, row_keys

    def _vertex_graph(self, bits):
        """PlanarGraph of the resolution (for the MOY certificate)."""
        parent = {}

        def find(a):
            while parent.get(a, a) != a:
                parent[a] = parent.get(parent[a], parent[a])
                a = parent[a]
            return a

        def union(a, b):
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb

        for a in self.diagram.arcs:
            parent.setdefault(a, a)
        for (a, b) in self.diagram.joints:
            union(a, b)
        for c, x in enumerate(self.diagram.crossings):
            if bits[c] == 0:
                union(x.under_in, x.over_out)
                union(x.over_in, x.under_out)
        wides = []
        for c, x in enumerate(self.diagram.crossings):
            if bits[c] == 1:
                i, j, k, l = x.slots()
                wides.append((str(find(i)), str(find(j)),
                              str(find(k)), str(find(l))))
        attached = set()
        for w in wides:
            attached.update(w)
        circles = sorted({str(find(a)) for a in self.diagram.arcs}
                         - attached)
        circles += [str(a) for a in self.diagram.free_circles]
        return PlanarGraph(wides=wides, circles=circles)

    def cohdeg(self, bits):
        return sum(b * (1 if x.sign < 0 else -1)
                   for b, x in zip(bits, self.diagram.crossings))

    def _build_vertices(self):
        nc = len(self.diagram.crossings)
        for bits in itertools.product((0, 1), repeat=nc):
            rows, row_of_crossing, shift, row_keys = self._vertex_rows(bits)
            mf = koszul(rows, self.n, self.field,
                        extra_shift=shift - sum(bits), check=False)

            reduced, path = reduce_linear_rows(mf)
            graph = self._vertex_graph(bits)
            try:
                cert = moy_dimension(graph, self.n).shift(shift)
            except Irreducible:
                cert = None
            H = MFCohomology(reduced, certificate=cert, engine=self.engine)
            vd = VertexData(
                bits=bits, mf=mf, reduced=reduced, path=path, H=H,
                graph=graph, cohdeg=self.cohdeg(bits), shift=shift,
                certificate=cert, row_of_crossing=row_of_crossing)
            vd.row_keys = row_keys
            self.vertices[bits] = vd

    # -- chi transport -----------------------------------------------------------

    def chi_edge(self, bits, c):
        """(target_bits, direction): the d_chi edge at crossing c, if any."""
        x = self.diagram.crossings[c]
        if x.sign > 0 and bits[c] == 1:
            return bits[:c] + (0,) + bits[c + 1:], 1
        if x.sign < 0 and bits[c] == 0:
            return bits[:c] + (1,) + bits[c + 1:], 0
        return None

    def transport(self, bits, c, chain_reduced):
        """Image of a reduced cocycle under the chi map at crossing c."""
        edge = self.chi_edge(bits, c)
        if edge is None:
            raise ValueError("no chi edge at crossing %d from %s" % (c, bits))
        tbits, direction = edge
        src = self.vertices[bits]
        tgt = self.vertices[tbits]
        x = self.diagram.crossings[c]
        i, j, k, l = (arc_var(a) for a in x.slots())
        B0, B1 = chi_matrices(self.potential, self.field, i, j, k, l,
                              direction)
        full = src.path.include_cocycle(chain_reduced)
        moved = apply_block_map(full, tgt.mf, src.row_of_crossing[c], B0, B1)
        return tgt.path.project(moved)

    def _assemble(self):
        order = sorted(self.vertices)
        self.basis = []
        self.basis_index = {}
        for bits in order:
            vd = self.vertices[bits]
            for ci, cl in enumerate(vd.H.classes):
                self.basis_index[(bits, ci)] = len(self.basis)
                self.basis.append((bits, ci))
        items = []
        for (bits, ci) in self.basis:
            vd = self.vertices[bits]
            items.append((vd.cohdeg, vd.H.classes[ci].level))
        d = {}
        for bits in order:
            vd = self.vertices[bits]
            for c in range(len(self.diagram.crossings)):
                edge = self.chi_edge(bits, c)
                if edge is None:
                    continue
                tbits, _ = edge
                sign = (-1) ** sum(bits[:c])
                tvd = self.vertices[tbits]
                for ci, cl in enumerate(vd.H.classes):
                    image = self.transport(bits, c, cl.rep)
                    coeffs = tvd.H.reduce(image)
                    for tci, coeff in coeffs.items():
                        if is_zero(coeff):
                            continue
                        key = (self.basis_index[(tbits, tci)],
                               self.basis_index[(bits, ci)])
                        val = coeff if sign > 0 else -coeff
                        s = d.get(key, self.field.zero) + val
                        if is_zero(s):
                            d.pop(key, None)
                        else:
                            d[key] = s
        labels = list(self.basis)
        self.complex = FilteredComplex(self.field, items, d, labels,
                                       check=True)

    # -- reports ---------------------------------------------------------------------

    def homology(self):
        return self.complex.homology()

    def poincare(self):
        return self.complex.poincare()

    def poincare_polynomial(self):
        return self.complex.poincare_polynomial()

    def total_dimension(self):
        return self.complex.total_homology_dimension()

    def gmax_gmin(self):
        return self.complex.gmax_gmin()

    def pages(self, k_max=None):
        return self.complex.pages(k_max)

    def page(self, r):
        return self.complex.page(r)


def homology(diagram, potential, field=None):
    """H_p(D) as a ResolutionCube (filtered, cohomologically graded)."""
    return ResolutionCube(diagram, potential, field)
