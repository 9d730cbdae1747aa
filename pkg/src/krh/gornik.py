"""Root-of-unity basis machinery for the deformed link cohomology.

For p(x) = x^{n+1} - (n+1)x over Q(zeta_n), every labeling of the link
components by {0, ..., n-1} produces an explicit cocycle of the chi complex:
resolve equal-label crossings by the oriented smoothing and unequal-label
crossings by a virtual crossing, put the circle classes f_label on the
resulting circles, and push through the xi_0 maps that turn virtual
crossings into wide edges.  These n^m classes form a basis of H_p(D); Morse
moves act on them by the circle creation/annihilation/saddle laws, and the
filtration extremes give the generalized Rasmussen invariants.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .cobordisms import apply_site_map, xi_matrices
from .cohomology import MFModel
from .cube import ResolutionCube, arc_var
from .fields import CyclotomicField, is_zero
from .laurent import Laurent
from .linalg import Echelon, vec_scale
from .links import Crossing, LinkDiagram
from .mf import Chain, KoszulRow, koszul
from .morse import (CubeMap, IllegalMove, birth, birth_map, death,
                    death_map, merge_chains, saddle_core, saddle_map,
                    subdivide_map)
from .poly import Poly
from .potential import Potential, gornik_f, LabelOutOfRange


class NotAKnot(ValueError):
    pass


def link_states(diagram, n):
    """All labelings of the link components by {0,...,n-1}."""
    m = len(diagram.components)
    return [dict(zip(range(m), labels))
            for labels in itertools.product(range(n), repeat=m)]


class GornikClass:
    """An f_phi cocycle: its vertex, cube coordinates and filtration level."""

    __slots__ = ("state", "bits", "vector", "level")

    def __init__(self, state, bits, vector, level):
        self.state = state
        self.bits = bits
        self.vector = vector
        self.level = level

    def __repr__(self):
        return "f_%s@%s" % (self.state, self.bits)


class GornikBasis:
    """The f_phi classes of a diagram, living in the cube of a ResolutionCube."""

    def __init__(self, diagram, n, cube=None):
        self.diagram = diagram
        self.n = n
        self.potential = Potential.gornik(n)
        self.field = CyclotomicField(n)
        self.cube = cube or ResolutionCube(diagram, self.potential, self.field)
        self._arc_component = {}
        for ci, comp in enumerate(diagram.components):
            for a in comp:
                self._arc_component[a] = ci

    def state_bits(self, state):
        bits = []
        for x in self.diagram.crossings:
            ku = state[self._arc_component[x.under_in]]
            ko = state[self._arc_component[x.over_in]]
            bits.append(0 if ku == ko else 1)
        return tuple(bits)

    def _virtual_circles(self, state):
        """Circles of D_phi^0 (virtual crossings pass straight through)."""
        succ = {}
        for x in self.diagram.crossings:
            ku = state[self._arc_component[x.under_in]]
            ko = state[self._arc_component[x.over_in]]
            if ku == ko:
                succ[x.under_in] = x.over_out
                succ[x.over_in] = x.under_out
            else:
                succ[x.under_in] = x.under_out
                succ[x.over_in] = x.over_out
        for (a, b) in self.diagram.joints:
            succ[a] = b
        circles = []
        seen = set()
        for a in sorted(succ):
            if a in seen:
                continue
            cyc = [a]
            seen.add(a)
            cur = succ[a]
            while cur != a:
                seen.add(cur)
                cyc.append(cur)
                cur = succ[cur]
            circles.append(cyc)
        for a in self.diagram.free_circles:
            circles.append([a])
        return circles

    def gornik_class(self, state):
        """Construct f_phi as cube coordinates at its resolution vertex."""
        for v in state.values():
            if not 0 <= v <= self.n - 1:
                raise LabelOutOfRange("state label out of range")
        bits = self.state_bits(state)
        vd = self.cube.vertices[bits]
        field = self.field
        pot = self.potential

        # rows of the virtual factorization, aligned with the vertex rows
        virt_rows = list(vd.mf.rows)
        sites = []
        for c, x in enumerate(self.diagram.crossings):
            if bits[c] == 1:
                i, j, k, l = (arc_var(a) for a in x.slots())
                r1, r2 = vd.row_of_crossing[c]
                virt_rows[r1] = KoszulRow(
                    pot.pi(i, l, field),
                    Poly.var(i, field) - Poly.var(l, field))
                virt_rows[r2] = KoszulRow(
                    pot.pi(j, k, field),
                    Poly.var(j, field) - Poly.var(k, field))
                sites.append((c, (r1, r2), (i, j, k, l)))
        shift = vd.mf.gens[0][vd.mf.index[0][tuple(0 for _ in virt_rows)]].shift
        mv = koszul(virt_rows, self.n, field, extra_shift=shift, check=False)

        # product of the circle classes f_{label}
        circles = self._virtual_circles(state)
        chain = None
        for cyc in circles:
            label = state[self._arc_component[cyc[0]]]
            crows = []
            slot_map = {}
            for t, a in enumerate(cyc):
                b = cyc[(t + 1) % len(cyc)]
                va, vb = arc_var(a), arc_var(b)
                if va == vb:
                    row = KoszulRow(pot.derivative_at(va, field),
                                    Poly.zero(field))
                else:
                    row = KoszulRow(pot.pi(vb, va, field),
                                    Poly.var(vb, field) - Poly.var(va, field))
                # locate this row among the virtual rows
                for ridx, r in enumerate(virt_rows):
                    if ridx in slot_map.values():
                        continue
                    if r.a == row.a and r.b == row.b:
                        slot_map[len(crows)] = ridx
                        break
                else:
                    raise RuntimeError("circle row not found in factorization")
                crows.append(row)
            cm = MFModel(koszul(crows, self.n, field, check=False),
                         certificate=Laurent.quantum_integer(self.n))
            red = cm.reduced
            var = red.variables[0]
            # the reduced circle is a single row (p', 0); f_label on theta
            assert len(red.rows) == 1 and not red.rows[0].b
            rep = Chain(red, 1, {red.index[1][(1,)]:
                                 gornik_f(self.n, label, var)})
            full_rep = cm.lift_full(rep)
            if chain is None:
                chain = merge_chains(
                    Chain(mv, 0, {mv.index[0][tuple(0 for _ in virt_rows)]:
                                  Poly.const(1, field)}),
                    full_rep, mv,
                    {t: t for t in range(len(virt_rows))}, slot_map)
            else:
                chain = merge_chains(chain, full_rep, mv,
                                     {t: t for t in range(len(virt_rows))},
                                     slot_map)
        if chain is None:
            chain = Chain(mv, 0, {mv.index[0][()]:
                                  Poly.const(1, field)})
        assert not mv.apply_d(chain).comps, "f_phi^0 is not a cocycle"

        # push through xi_0 at every virtual crossing, one site at a time
        cur_rows = list(virt_rows)
        cur_mf = mv
        for (c, (r1, r2), (i, j, k, l)) in sites:
            next_rows = list(cur_rows)
            next_rows[r1] = vd.mf.rows[r1]
            next_rows[r2] = vd.mf.rows[r2]
            nxt = koszul(next_rows, self.n, field, extra_shift=shift,
                         check=False) if next_rows != list(vd.mf.rows) \
                else vd.mf
            U0, U1 = xi_matrices(pot, field, i, j, k, l, 0)
            chain = apply_site_map(chain, nxt, (r1, r2), U0, U1)
            cur_rows = next_rows
            cur_mf = nxt
        # the final factorization has the vertex's own rows; re-attach
        chain = Chain(vd.mf, chain.parity, chain.comps)
        assert not vd.mf.apply_d(chain).comps, "xi image is not a cocycle"

        coeffs = vd.H.reduce(vd.path.project(chain))
        vector = {self.cube.basis_index[(bits, ci)]: c
                  for ci, c in coeffs.items()}
        level = max((vd.H.classes[ci].level
                     for ci in coeffs), default=None)
        return GornikClass(dict(state), bits, vector, level)

    # -- the basis -------------------------------------------------------------

    def all_classes(self):
        return [self.gornik_class(s)
                for s in link_states(self.diagram, self.n)]

    def is_cocycle(self, cls):
        return not self.cube.complex.apply_d(cls.vector)

    def homology_coordinates(self, classes=None):
        """Coordinates of each f_phi in H_p(D); checks independence."""
        classes = classes or self.all_classes()
        cx = self.cube.complex
        cx.homology()
        key = cx._key()
        out = []
        for cls in classes:
            deg = None
            for idx in cls.vector:
                d = cx.items[idx][0]
                assert deg is None or deg == d
                deg = d
            boundaries = Echelon(key)
            for j in cx.indices_of_degree(deg - 1):
                boundaries.add(cx.apply_d({j: cx.field.one}))
            combined = Echelon(key)
            combined.rows = dict(boundaries.rows)
            pivots = []
            for rv in cx._homology_reps.get(deg, []):
                residue, _, _ = combined.reduce(rv)
                piv = max(residue, key=key)
                c = residue[piv]
                combined.rows[piv] = (vec_scale(residue, 1 / c), {})
                pivots.append(piv)
            residue, _, coeffs = combined.reduce(dict(cls.vector))
            assert not residue, "f_phi is not a cocycle mod boundaries"
            out.append((deg, {p: coeffs.get(p, cx.field.zero)
                              for p in pivots}))
        return out

    def dimension_check(self):
        """dim H_p(D) = n^m and the f_phi classes are a basis."""
        m = len(self.diagram.components)
        expected = self.n ** m
        total = self.cube.total_dimension()
        classes = self.all_classes()
        coords = self.homology_coordinates(classes)
        ech = Echelon()
        for deg, cf in coords:
            ech.add({(deg, p): c for p, c in cf.items() if not is_zero(c)})
        independent = len(ech) == len(classes)
        report = {
            "components": m,
            "expected": expected,
            "dimension": total,
            "classes": len(classes),
            "independent": independent,
            "ok": total == expected and independent,
        }
        return report["ok"], report

    def eigenvalue_check(self, cls, arc):
        """x_arc acts on f_phi by zeta^{label of the arc's component}."""
        vd = self.cube.vertices[cls.bits]
        label = cls.state[self._arc_component[arc]]
        zeta = self.field.zeta_power(label)
        coeffs = {ci: c for idx, c in cls.vector.items()
                  for (b2, ci) in [self.cube.basis[idx]]}
        rep = None
        for ci, c in coeffs.items():
            term = vd.H.classes[ci].rep.scale(c)
            rep = term if rep is None else rep + term
        # multiply upstairs: the arc variable may be excluded downstairs
        full = vd.path.include_cocycle(rep)
        moved = full.times_poly(Poly.var(arc_var(arc), self.field))
        got = vd.H.reduce(vd.path.project(moved))
        expect = {ci: zeta * c for ci, c in coeffs.items()}
        got = {k: v for k, v in got.items() if not is_zero(v)}
        expect = {k: v for k, v in expect.items() if not is_zero(v)}
        return got == expect


# -- movies ---------------------------------------------------------------------


class Movie:
    """A sequence of elementary cobordisms applied to a starting diagram.

    Steps: ("birth",), ("death", circle), ("saddle", arc_up, arc_down),
    ("r1+", arc).  Tracks the diagrams, the surface genealogy (which link
    components lie on which surface component), and the Euler characteristic.
    """

    def __init__(self, diagram, steps=()):
        self.diagrams = [diagram]
        self.steps = []
        self.sites = []
        # genealogy: surface components as disjoint sets of (stage, comp_idx)
        self._parent = {}
        self._created = set()
        for ci in range(len(diagram.components)):
            self._parent[(0, ci)] = (0, ci)
        for s in steps:
            self.apply(s)

    # union-find over (stage, component) nodes
    def _find(self, node):
        while self._parent[node] != node:
            self._parent[node] = self._parent[self._parent[node]]
            node = self._parent[node]
        return node

    def _union(self, a, b):
        ra, rb = self._find(a), self._find(b)
        if ra != rb:
            self._parent[ra] = rb

    def _advance_components(self, old, new, stage, links=()):
        """Register the new diagram's components; ``links`` maps new comps to
        old comps sharing an arc (same strand)."""
        for ci in range(len(new.components)):
            node = (stage, ci)
            self._parent[node] = node
        arcs_old = {}
        for ci, comp in enumerate(old.components):
            for a in comp:
                arcs_old[a] = ci
        for ci, comp in enumerate(new.components):
            for a in comp:
                if a in arcs_old:
                    self._union((stage, ci), (stage - 1, arcs_old[a]))
                    break
            else:
                self._created.add((stage, ci))

    def apply(self, step):
        d = self.diagrams[-1]
        stage = len(self.diagrams)
        kind = step[0]
        if kind == "birth":
            nd, circle = birth(d)
            self._push(step, nd, ("birth", circle))
        elif kind == "death":
            nd = death(d, step[1])
            self._push(step, nd, ("death", step[1]))
        elif kind == "saddle":
            arc_up, arc_down = step[1], step[2]
            if arc_up == arc_down:
                raise IllegalMove("saddle needs two distinct arcs")
            d1, up_new = d.subdivide_arc(arc_up)
            self._push(("subdivide", arc_up), d1,
                       ("subdivide", (arc_up, up_new)))
            d2, down_new = d1.subdivide_arc(arc_down)
            self._push(("subdivide", arc_down), d2,
                       ("subdivide", (arc_down, down_new)))
            nd, site = saddle_core(d2, arc_up, up_new, arc_down, down_new)
            self._push(step, nd, ("saddle", site))
        elif kind == "r1+":
            nd, data = kink_positive(d, step[1])
            self._push(step, nd, ("r1+", data))
        else:
            raise IllegalMove("unsupported movie step %r" % (kind,))
        return self.diagrams[-1]

    def _push(self, step, nd, site):
        stage = len(self.diagrams)
        old = self.diagrams[-1]
        self.steps.append(step)
        self.sites.append(site)
        self.diagrams.append(nd)
        self._advance_components(old, nd, stage)

    def euler_characteristic(self):
        chi = 0
        for s in self.steps:
            if s[0] in ("birth", "death"):
                chi += 1
            elif s[0] == "saddle":
                chi -= 1
        return chi

    def level_shift(self):
        """Total filtration shift -(n-1)chi(S) is per-potential; see maps."""
        return self.euler_characteristic()

    def v1(self):
        return (len(self.diagrams[0].components)
                + len(self.diagrams[-1].components)) % 2

    def surface_components(self):
        comps = {}
        for node in self._parent:
            comps.setdefault(self._find(node), []).append(node)
        return list(comps.values())

    def has_closed_component(self):
        last = len(self.diagrams) - 1
        for comp in self.surface_components():
            if not any(stage in (0, last) for stage, _ in comp):
                return True
        return False

    def compatible_states(self, k, n):
        """States of the final diagram compatible with the all-k state."""
        last = len(self.diagrams) - 1
        final = self.diagrams[last]
        groups = {}
        for ci in range(len(final.components)):
            root = self._find((last, ci))
            groups.setdefault(root, []).append(ci)
        evolved_roots = set()
        for ci in range(len(self.diagrams[0].components)):
            evolved_roots.add(self._find((0, ci)))
        free_groups = [g for r, g in groups.items() if r not in evolved_roots]
        fixed = {}
        for r, g in groups.items():
            if r in evolved_roots:
                for ci in g:
                    fixed[ci] = k
        out = []
        for labels in itertools.product(range(n), repeat=len(free_groups)):
            st = dict(fixed)
            for g, l in zip(free_groups, labels):
                for ci in g:
                    st[ci] = l
            out.append(st)
        return out

    def cube_maps(self, potential, field=None):
        """The chain maps of all steps on the Gornik/deformed cubes."""
        field = field or potential.base_field()
        cubes = [ResolutionCube(dg, potential, field)
                 for dg in self.diagrams]
        maps = []
        for idx, s in enumerate(self.sites):
            src, tgt = cubes[idx], cubes[idx + 1]
            if s[0] == "birth":
                maps.append(birth_map(src, tgt, s[1]))
            elif s[0] == "death":
                maps.append(death_map(src, tgt, s[1]))
            elif s[0] == "saddle":
                maps.append(saddle_map(src, tgt, s[1]))
            elif s[0] == "subdivide":
                maps.append(subdivide_map(src, tgt, s[1]))
            elif s[0] == "r1+":
                maps.append(kink_positive_map(src, tgt, s[1]))
        return cubes, maps

    def composite(self, potential, field=None):
        cubes, maps = self.cube_maps(potential, field)
        total = maps[0]
        for m in maps[1:]:
            total = m.compose(total)
        return cubes, total


def kink_positive(diagram, arc):
    """Add a positive kink on an arc; returns (diagram', (arc, b, c))."""
    d1, b = diagram.subdivide_arc(arc)
    d2, c = d1.subdivide_arc(b)
    joints = [j for j in d2.joints if j not in ((arc, b), (b, c))]
    crossings = d2.crossings + [Crossing(1, arc, b, b, c)]
    nd = LinkDiagram(crossings, d2.free_circles, diagram.name + "+kink",
                     joints)
    return nd, (arc, b, c)


def kink_positive_map(source_cube, target_cube, data):
    """J o iota: include classes at the kink's oriented-smoothing vertices."""
    a, b, c = data
    n = source_cube.n
    field = source_cube.field
    kink_index = len(target_cube.diagram.crossings) - 1
    from .mf import exclude_variable
    entries = {}
    for bits, vd in source_cube.vertices.items():
        tbits = bits + (0,)
        tvd = target_cube.vertices[tbits]
        # rows of tvd: crossing rows of D, kink rows, joints, circles.
        # kink bit 0 rows: (p'(x_b), 0) and (pi(x_c, x_a), x_c - x_a).
        r1, r2 = tvd.row_of_crossing[kink_index]
        excluded, wit = exclude_variable(tvd.mf, r2, var=arc_var(c))
        # excluded = vd rows (x_c := x_a) plus the loop row (p'(x_b), 0)
        from .cobordisms import append_circle
        for ci, cl in enumerate(vd.H.classes):
            full = vd.path.include_cocycle(cl.rep)
            mid = append_circle(full, excluded, r1)
            img = wit.include_cocycle(mid)
            coeffs = tvd.H.reduce(tvd.path.project(img))
            for tci, cc in coeffs.items():
                entries[(target_cube.basis_index[(tbits, tci)],
                         source_cube.basis_index[(bits, ci)])] = cc
    return CubeMap(source_cube, target_cube, entries, level_shift=0,
                   name="r1+")


# -- invariants ---------------------------------------------------------------------


def s_invariant(diagram, n, cube=None):
    """s_n = (gmax + gmin)/2 for the Gornik potential; knots only."""
    if len(diagram.components) != 1:
        raise NotAKnot("s_n is defined for knots")
    cube = cube or ResolutionCube(diagram, Potential.gornik(n))
    gmax, gmin = cube.gmax_gmin()
    return Fraction(gmax + gmin, 2), (gmax, gmin)


def slice_bound_report(diagram, n, surface_chi, cube=None):
    """Check g^max >= (n-1) chi for a candidate slice surface."""
    cube = cube or ResolutionCube(diagram, Potential.gornik(n))
    gmax, gmin = cube.gmax_gmin()
    bound = (n - 1) * surface_chi
    implied = Fraction(gmax, n - 1)
    return {
        "n": n,
        "gmax": gmax,
        "gmin": gmin,
        "surface_chi": surface_chi,
        "bound_holds": gmax >= bound,
        "chi_s_upper_bound": implied,
    }
