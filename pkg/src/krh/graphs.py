"""MOY planar graphs and their matrix factorizations.

A graph consists of oriented regular edges, double wide edges (two regular
edges in, two out) and triple wide edges (three in, three out).  Regular
edges are named; the name doubles as the marking variable of the edge (one
marked point per regular edge, the canonical minimum).  Free circles are
regular edges attached to no wide edge.

The factorization of a closed graph is the Koszul tensor of
  * an arc row (pi_{ii}, 0) for every free circle,
  * wide-edge rows (u, x_i+x_j-x_k-x_l), (v, x_i x_j - x_k x_l) with a
    global {-1} per wide edge,
  * triple-edge rows (a_m, b_m) with a global {-3} per triple edge,
where a wide edge reads its variables off the markings of its four incident
edges.  Arc rows (pi_{ij}, x_i - x_j) appear when an edge carries more than
one marking (e.g. a circle cut at several points).
"""

from __future__ import annotations

import itertools

from .cohomology import MFCohomology
from .laurent import Laurent
from .mf import KoszulRow, koszul, reduce_linear_rows
from .poly import Poly


class UnmarkedEdge(ValueError):
    pass


class GraphStructureError(ValueError):
    pass


class PlanarGraph:
    """Combinatorial MOY graph: wide/triple edge records over named edges."""

    def __init__(self, wides=(), triples=(), circles=(), extra_markings=None):
        self.wides = [tuple(map(str, w)) if len(w) == 4 else
                      (str(w[0]), str(w[1]), str(w[2]), str(w[3]))
                      for w in wides]
        self.wides = [(o1, o2, i1, i2) for (o1, o2, i1, i2) in self.wides]
        self.triples = [((str(a), str(b), str(c)), (str(d), str(e), str(f)))
                        for ((a, b, c), (d, e, f)) in triples]
        self.circles = [str(c) for c in circles]
        # extra marked points per edge: edge -> number of markings (default 1)
        self.extra_markings = dict(extra_markings or {})
        self._validate()

    # -- structure -------------------------------------------------------------

    def _validate(self):
        outs = {}
        ins = {}
        for w, (o1, o2, i1, i2) in enumerate(self.wides):
            for pos, e in ((0, o1), (1, o2)):
                if e in outs:
                    raise GraphStructureError("edge %s exits twice" % e)
                outs[e] = ("W", w, pos)
            for pos, e in ((0, i1), (1, i2)):
                if e in ins:
                    raise GraphStructureError("edge %s enters twice" % e)
                ins[e] = ("W", w, pos)
        for t, (os, is_) in enumerate(self.triples):
            for pos, e in enumerate(os):
                if e in outs:
                    raise GraphStructureError("edge %s exits twice" % e)
                outs[e] = ("T", t, pos)
            for pos, e in enumerate(is_):
                if e in ins:
                    raise GraphStructureError("edge %s enters twice" % e)
                ins[e] = ("T", t, pos)
        for c in self.circles:
            if c in outs or c in ins:
                raise GraphStructureError("circle %s attached to a node" % c)
        self.edge_tail = outs   # edge leaves this node
        self.edge_head = ins    # edge arrives at this node

    def edges(self):
        names = set(self.circles)
        names.update(self.edge_tail)
        names.update(self.edge_head)
        return sorted(names)

    def is_closed(self):
        for e in self.edges():
            if e in self.circles:
                continue
            if e not in self.edge_tail or e not in self.edge_head:
                return False
        return True

    def open_ends(self):
        """(exits, entrances): markings of dangling edge ends."""
        exits, entrances = [], []
        for e in self.edges():
            if e in self.circles:
                continue
            ms = self.markings(e)
            if e not in self.edge_head:
                exits.append(ms[-1])
            if e not in self.edge_tail:
                entrances.append(ms[0])
        return exits, entrances

    def markings(self, edge):
        k = self.extra_markings.get(edge, 1)
        if k == 1:
            return [edge]
        return [edge] + ["%s.%d" % (edge, t) for t in range(1, k)]

    def variables(self):
        out = []
        for e in self.edges():
            out.extend(self.markings(e))
        return sorted(out)

    def i_parity(self):
        """Z2 circle count after replacing wide edges by parallel arcs.

        Triple edges are replaced by three parallel arcs (in order), which
        extends the paper's circle-count rule to triple edges.
        """
        succ = {}
        for (o1, o2, i1, i2) in self.wides:
            succ[i1] = o1
            succ[i2] = o2
        for (os, is_) in self.triples:
            for e_in, e_out in zip(is_, os):
                succ[e_in] = e_out
        count = len(self.circles)
        seen = set()
        for e in succ:
            if e in seen:
                continue
            count += 1
            cur = e
            while cur not in seen:
                seen.add(cur)
                cur = succ[cur]
        return count % 2

    def disjoint_union(self, other, rename=None):
        ren = rename or (lambda e: e)
        wides = self.wides + [tuple(ren(x) for x in w) for w in other.wides]
        triples = self.triples + [tuple(tuple(ren(x) for x in half)
                                        for half in t) for t in other.triples]
        circles = self.circles + [ren(c) for c in other.circles]
        extra = dict(self.extra_markings)
        extra.update({ren(e): k for e, k in other.extra_markings.items()})
        return PlanarGraph(wides, triples, circles, extra)

    def to_text(self):
        lines = []
        for (o1, o2, i1, i2) in self.wides:
            lines.append("W(in:[%s,%s], out:[%s,%s])" % (i1, i2, o1, o2))
        for (os, is_) in self.triples:
            lines.append("T(in:[%s,%s,%s], out:[%s,%s,%s])"
                         % (is_ + os))
        for c in self.circles:
            lines.append("O(%s)" % c)
        for e, k in sorted(self.extra_markings.items()):
            if k > 1:
                lines.append("M(%s,%d)" % (e, k))
        return "\n".join(lines)

    @classmethod
    def from_text(cls, text):
        import re
        wides, triples, circles, extra = [], [], [], {}
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            m = re.fullmatch(r"W\(in:\[([^]]+)\],\s*out:\[([^]]+)\]\)", line)
            if m:
                ins = [s.strip() for s in m.group(1).split(",")]
                outs = [s.strip() for s in m.group(2).split(",")]
                if len(ins) != 2 or len(outs) != 2:
                    raise GraphStructureError("wide edge needs 2 in, 2 out")
                wides.append((outs[0], outs[1], ins[0], ins[1]))
                continue
            m = re.fullmatch(r"T\(in:\[([^]]+)\],\s*out:\[([^]]+)\]\)", line)
            if m:
                ins = tuple(s.strip() for s in m.group(1).split(","))
                outs = tuple(s.strip() for s in m.group(2).split(","))
                if len(ins) != 3 or len(outs) != 3:
                    raise GraphStructureError("triple edge needs 3 in, 3 out")
                triples.append((outs, ins))
                continue
            m = re.fullmatch(r"O\(([^)]+)\)", line)
            if m:
                circles.append(m.group(1).strip())
                continue
            m = re.fullmatch(r"M\(([^,]+),\s*(\d+)\)", line)
            if m:
                extra[m.group(1).strip()] = int(m.group(2))
                continue
            raise GraphStructureError("cannot parse graph line: %r" % raw)
        return cls(wides, triples, circles, extra)


# -- factorization -------------------------------------------------------------


class CpBuild:
    """C_p(Gamma) plus bookkeeping of which rows belong to which feature."""

    def __init__(self, mf, row_map, graph, potential, field):
        self.mf = mf
        self.row_map = row_map
        self.graph = graph
        self.potential = potential
        self.field = field


def build_cp(graph, potential, field=None, check=False):
    """Koszul factorization of a graph; rows ordered wides, triples, arcs."""
    field = field or potential.base_field()
    p = potential
    rows = []
    row_map = {}
    shift = 0
    for w, (o1, o2, i1, i2) in enumerate(graph.wides):
        xi = graph.markings(o1)[0]
        xj = graph.markings(o2)[0]
        xk = graph.markings(i1)[-1]
        xl = graph.markings(i2)[-1]
        u, v = p.uv(xi, xj, xk, xl, field)
        b1 = (Poly.var(xi, field) + Poly.var(xj, field)
              - Poly.var(xk, field) - Poly.var(xl, field))
        b2 = (Poly.var(xi, field) * Poly.var(xj, field)
              - Poly.var(xk, field) * Poly.var(xl, field))
        row_map[("wide", w)] = (len(rows), len(rows) + 1)
        row_map[("wide_vars", w)] = (xi, xj, xk, xl)
        rows.append(KoszulRow(u, b1))
        rows.append(KoszulRow(v, b2))
        shift -= 1
    for t, (os, is_) in enumerate(graph.triples):
        outs = [graph.markings(e)[0] for e in os]
        ins = [graph.markings(e)[-1] for e in is_]
        trows = p.sym3_rows(outs, ins, field)
        row_map[("triple", t)] = tuple(len(rows) + i for i in range(3))
        for a, b in trows:
            rows.append(KoszulRow(a, b))
        shift -= 3
    for e in graph.edges():
        ms = graph.markings(e)
        pairs = list(zip(ms, ms[1:]))
        if e in graph.circles:
            pairs.append((ms[-1], ms[0]))
        for frm, to in pairs:
            row_map[("arc", to, frm)] = len(rows)
            if to == frm:
                rows.append(KoszulRow(p.derivative_at(to, field),
                                      Poly.zero(field)))
            else:
                rows.append(KoszulRow(
                    p.pi(to, frm, field),
                    Poly.var(to, field) - Poly.var(frm, field)))
    mf = koszul(rows, p.n, field, extra_shift=shift, check=check)
    return CpBuild(mf, row_map, graph, potential, field)


class GraphCohomology:
    """H_p of a closed graph with quantum filtration and chain machinery."""

    def __init__(self, graph, potential, field=None, certificate=None,
                 engine=None):
        if not graph.is_closed():
            raise GraphStructureError("cohomology needs a closed graph")
        self.graph = graph
        self.potential = potential
        self.field = field or potential.base_field()
        self.build = build_cp(graph, potential, self.field)
        self.reduced, self.path = reduce_linear_rows(self.build.mf)
        if certificate is None:
            from .moy import moy_dimension, Irreducible
            try:
                certificate = moy_dimension(graph, potential.n)
            except Irreducible:
                certificate = None
        self.certificate = certificate
        self.H = MFCohomology(self.reduced, certificate=certificate,
                              engine=engine)

    @property
    def dim(self):
        return self.H.dim

    def filtered_dimension(self):
        return self.H.filtered_dimension()

    def parities(self):
        return self.H.parities()

    def classes(self):
        return self.H.classes

    def lift_to_full(self, chain):
        """Cocycle of the reduced model -> cocycle of C_p(Gamma)."""
        return self.path.include_cocycle(chain)

    def project_to_reduced(self, chain):
        return self.path.project(chain)

    def reduce(self, chain, check=True):
        return self.H.reduce(chain, check=check)

    def filtration_level(self, chain, check=True):
        return self.H.filtration_level(chain, check=check)

    def multiply_class(self, class_index, poly):
        """Class of poly * (class representative); exact coefficients."""
        rep = self.H.classes[class_index].rep.times_poly(poly)
        return self.reduce(rep)


def graph_cohomology(graph, potential, field=None, certificate=None,
                     engine=None):
    return GraphCohomology(graph, potential, field, certificate, engine)


# -- admissible states ----------------------------------------------------------


def admissible_states(graph, n):
    """All edge labelings obeying the wide/triple-edge admissibility rules."""
    if not graph.is_closed():
        raise GraphStructureError("states need a closed graph")
    edges = graph.edges()
    idx = {e: i for i, e in enumerate(edges)}
    constraints = []
    for (o1, o2, i1, i2) in graph.wides:
        constraints.append(("W", (idx[i1], idx[i2], idx[o1], idx[o2])))
    for (os, is_) in graph.triples:
        constraints.append(("T", tuple(idx[e] for e in is_) +
                            tuple(idx[e] for e in os)))
    out = []
    labels = [None] * len(edges)

    def ok(cidx):
        for kind, ports in constraints:
            vals = [labels[i] for i in ports]
            if any(v is None for v in vals):
                continue
            if kind == "W":
                e1, e2, e3, e4 = vals
                if e1 == e2 or {e1, e2} != {e3, e4}:
                    return False
            else:
                ins, outs = set(vals[:3]), set(vals[3:])
                if len(ins) < 3 or ins != outs:
                    return False
        return True

    def rec(i):
        if i == len(edges):
            out.append({e: labels[idx[e]] for e in edges})
            return
        for v in range(n):
            labels[i] = v
            if ok(i):
                rec(i + 1)
        labels[i] = None

    rec(0)
    return out
