"""Morse moves on diagrams and the chain maps they induce on the cubes.

Births, deaths and saddles leave every crossing untouched, so the cubes of
the two diagrams have the same vertex set and the induced map is vertexwise:

    birth   z -> z (x) theta            degree 1-n, parity odd
    death   Kunneth coordinate of y^{n-1} theta  (epsilon), degree 1-n, odd
    saddle  the eta block map at the subdivided site, degree n-1, odd

A movie is a list of such steps (plus Reidemeister-I kinks); it tracks the
surface topology (Euler characteristic, component genealogy) needed by the
generalized Rasmussen machinery.
"""

from __future__ import annotations

import itertools

from .fields import is_zero
from .links import Crossing, LinkDiagram
from .mf import Chain
from .poly import Poly


class IllegalMove(ValueError):
    pass


class ClosedComponent(ValueError):
    pass


def merge_chains(z1, z2, target_mf, slot_map1, slot_map2):
    """Product of chains living on disjoint row sets of a larger Koszul MF.

    slot_map1/2 send the row indices of z1.mf / z2.mf into target rows; the
    Koszul braiding sign counts pairs of odd slots that swap order.
    """
    k = len(target_mf.rows)
    gens1 = z1.mf.gens[z1.parity]
    gens2 = z2.mf.gens[z2.parity]
    parity = (z1.parity + z2.parity) % 2
    tgt_index = target_mf.index[parity]
    out = {}
    for i1, p1 in z1.comps.items():
        bits1 = gens1[i1].label
        pos1 = [slot_map1[t] for t, b in enumerate(bits1) if b]
        for i2, p2 in z2.comps.items():
            bits2 = gens2[i2].label
            pos2 = [slot_map2[t] for t, b in enumerate(bits2) if b]
            nbits = [0] * k
            for s in pos1:
                nbits[s] = 1
            for s in pos2:
                nbits[s] = 1
            arrangement = pos1 + pos2
            swaps = sum(1 for i in range(len(arrangement))
                        for j in range(i + 1, len(arrangement))
                        if arrangement[i] > arrangement[j])
            sign = -1 if swaps % 2 else 1
            q = p1 * p2
            if sign < 0:
                q = -q
            tj = tgt_index[tuple(nbits)]
            prev = out.get(tj)
            out[tj] = q if prev is None else prev + q
    return Chain(target_mf, parity, out)


# -- diagram-level moves ---------------------------------------------------------


def birth(diagram):
    """Add a disjoint circle; returns (new_diagram, circle_arc)."""
    a = diagram.fresh_arc()
    return LinkDiagram(diagram.crossings, diagram.free_circles + [a],
                       diagram.name, diagram.joints), a


def death(diagram, circle):
    """Remove a bare free circle."""
    if circle not in diagram.free_circles:
        raise IllegalMove("death requires a bare free circle")
    return LinkDiagram(diagram.crossings,
                       [c for c in diagram.free_circles if c != circle],
                       diagram.name, diagram.joints)


def saddle_core(diagram, arc_up, up_new, arc_down, down_new):
    """Reconnect two subdivided strands across a saddle.

    The diagram must already contain the joints (arc_up, up_new) and
    (arc_down, down_new); the saddle replaces them by (arc_down, up_new)
    and (arc_up, down_new).  Returns (target, site) with the site markings
    (x1, x2, x3, x4) = (up_new, arc_down, down_new, arc_up).
    """
    if ((arc_up, up_new) not in diagram.joints
            or (arc_down, down_new) not in diagram.joints):
        raise IllegalMove("saddle strands are not subdivided")
    joints_tgt = [j for j in diagram.joints
                  if j not in ((arc_up, up_new), (arc_down, down_new))]
    joints_tgt += [(arc_down, up_new), (arc_up, down_new)]
    target = LinkDiagram(diagram.crossings, list(diagram.free_circles),
                         diagram.name, joints_tgt)
    return target, (up_new, arc_down, down_new, arc_up)


# -- cube-level maps ---------------------------------------------------------------


def _row_index_map(src_vd, tgt_vd, skip_src=(), skip_tgt=()):
    """Match rows of two vertex factorizations by their keys."""
    tgt_pos = {}
    for idx, key in enumerate(tgt_vd.row_keys):
        if idx in skip_tgt:
            continue
        tgt_pos[key] = idx
    out = {}
    for idx, key in enumerate(src_vd.row_keys):
        if idx in skip_src:
            continue
        out[idx] = tgt_pos[key]
    return out


class CubeMap:
    """A vertexwise chain map between the cubes of two diagrams.

    ``entries`` is the matrix over the assembled complex bases:
    {(target_basis_index, source_basis_index): coeff}.
    """

    def __init__(self, source_cube, target_cube, entries, level_shift,
                 name=""):
        self.source = source_cube
        self.target = target_cube
        self.entries = {k: v for k, v in entries.items() if not is_zero(v)}
        self.level_shift = level_shift
        self.name = name

    def verify_chain_map(self):
        """f d = d f on the assembled complexes."""
        A, B = self.source.complex, self.target.complex
        lhs = {}
        for (i, j), c in self.entries.items():
            for (i2, j2), c2 in B.d.items():
                if j2 == i:
                    key = (i2, j)
                    s = lhs.get(key, B.field.zero) + c2 * c
                    lhs[key] = s
        rhs = {}
        for (i, j), c in A.d.items():
            for (i2, j2), c2 in self.entries.items():
                if j2 == i:
                    key = (i2, j)
                    s = rhs.get(key, B.field.zero) + c2 * c
                    rhs[key] = s
        for key in set(lhs) | set(rhs):
            a = lhs.get(key, B.field.zero)
            b = rhs.get(key, B.field.zero)
            if not is_zero(a - b):
                return False
        return True

    def compose(self, earlier):
        assert earlier.target is self.source
        out = {}
        for (i, k), c in self.entries.items():
            for (k2, j), c2 in earlier.entries.items():
                if k2 == k:
                    key = (i, j)
                    s = out.get(key, self.target.field.zero) + c * c2
                    if is_zero(s):
                        out.pop(key, None)
                    else:
                        out[key] = s
        return CubeMap(earlier.source, self.target, out,
                       self.level_shift + earlier.level_shift,
                       earlier.name + ";" + self.name)

    def apply_class_map(self, vec):
        out = {}
        for (i, j), c in self.entries.items():
            if j in vec:
                s = out.get(i, self.target.field.zero) + c * vec[j]
                if is_zero(s):
                    out.pop(i, None)
                else:
                    out[i] = s
        return out

    def induced_on_homology(self):
        """Matrix of the induced map H(source) -> H(target) per cohdegree."""
        from .linalg import Echelon, vec_scale
        A, B = self.source.complex, self.target.complex
        A.homology()
        B.homology()
        out = {}
        for deg, reps in A._homology_reps.items():
            key = B._key()
            boundaries = Echelon(key)
            for j in B.indices_of_degree(deg - 1):
                boundaries.add(B.apply_d({j: B.field.one}))
            combined = Echelon(key)
            combined.rows = dict(boundaries.rows)
            tpivots = []
            for rv in B._homology_reps.get(deg, []):
                residue, _, _ = combined.reduce(rv)
                piv = max(residue, key=key)
                c = residue[piv]
                combined.rows[piv] = (vec_scale(residue, 1 / c), {})
                tpivots.append(piv)
            rows = []
            for rv in reps:
                img = self.apply_class_map(rv)
                residue, _, coeffs = combined.reduce(img)
                if residue:
                    raise ValueError("image is not a cocycle mod boundaries")
                rows.append([coeffs.get(p, B.field.zero) for p in tpivots])
            out[deg] = rows
        return out


def _vertexwise_map(source_cube, target_cube, per_vertex):
    """Assemble {(tgt_idx, src_idx): coeff} from a vertexwise chain-level map.

    ``per_vertex(bits, chain_full)`` returns a full chain of the target
    vertex factorization.
    """
    entries = {}
    for bits, vd in source_cube.vertices.items():
        tvd = target_cube.vertices[bits]
        for ci, cl in enumerate(vd.H.classes):
            full = vd.path.include_cocycle(cl.rep)
            image = per_vertex(bits, full)
            coeffs = tvd.H.reduce(tvd.path.project(image))
            for tci, c in coeffs.items():
                entries[(target_cube.basis_index[(bits, tci)],
                         source_cube.basis_index[(bits, ci)])] = c
    return entries


def birth_map(source_cube, target_cube, circle):
    """Circle creation: z -> z (x) theta at the new circle row."""
    def per_vertex(bits, full):
        vd = source_cube.vertices[bits]
        tvd = target_cube.vertices[bits]
        slot = tvd.row_keys.index(("circle", circle))
        # rows other than the circle match up in order
        assert [k for k in tvd.row_keys if k != ("circle", circle)] \
            == vd.row_keys
        from .cobordisms import append_circle
        return append_circle(full, tvd.mf, slot)
    return CubeMap(source_cube, target_cube,
                   _vertexwise_map(source_cube, target_cube, per_vertex),
                   level_shift=1 - source_cube.n, name="birth")


def death_map(source_cube, target_cube, circle):
    """Circle annihilation via the Kunneth coordinate at y^{n-1} theta."""
    n = source_cube.n
    field = source_cube.field
    y = "x%s" % circle
    entries = {}
    for bits, vd in source_cube.vertices.items():
        tvd = target_cube.vertices[bits]
        slot = vd.row_keys.index(("circle", circle))
        assert [k for k in vd.row_keys if k != ("circle", circle)] \
            == tvd.row_keys
        from .cobordisms import append_circle
        # Kunneth basis: [y^k theta (x) target class j]
        from .linalg import Echelon
        ech = Echelon()
        for j in range(tvd.H.dim):
            base = append_circle(tvd.path.include_cocycle(
                tvd.H.classes[j].rep), vd.mf, slot)
            for k in range(n):
                cf = vd.H.reduce(vd.path.project(
                    base.times_poly(Poly.var(y, field) ** k)))
                ech.add(dict(cf), {(k, j): field.one})
        for ci, cl in enumerate(vd.H.classes):
            combo, ok = ech.solve({ci: field.one})
            if not ok:
                raise RuntimeError("Kunneth decomposition failed")
            for (k, j), c in combo.items():
                if k == n - 1 and not is_zero(c):
                    key = (target_cube.basis_index[(bits, j)],
                           source_cube.basis_index[(bits, ci)])
                    s = entries.get(key, field.zero) + c
                    if is_zero(s):
                        entries.pop(key, None)
                    else:
                        entries[key] = s
    return CubeMap(source_cube, target_cube, entries,
                   level_shift=1 - n, name="death")


def reorder_chain(chain, target_mf, perm):
    """Move a chain across a Koszul slot permutation (with braiding signs).

    ``perm[src_slot] = target_slot``; the sign on a generator is the parity
    of the permutation induced on its set bits.
    """
    src_gens = chain.mf.gens[chain.parity]
    tgt_index = target_mf.index[chain.parity]
    k = len(target_mf.rows)
    out = {}
    for gi, poly in chain.comps.items():
        bits = src_gens[gi].label
        setpos = [perm[t] for t, b in enumerate(bits) if b]
        inv = sum(1 for i in range(len(setpos))
                  for j in range(i + 1, len(setpos))
                  if setpos[i] > setpos[j])
        nbits = [0] * k
        for s in setpos:
            nbits[s] = 1
        q = poly if inv % 2 == 0 else -poly
        tj = tgt_index[tuple(nbits)]
        prev = out.get(tj)
        out[tj] = q if prev is None else prev + q
    return Chain(target_mf, chain.parity, out)


def subdivide_map(source_cube, target_cube, joint):
    """Transport along an added marked point (a quasi-isomorphism).

    Subdividing an arc adds the joint row (pi, x_new - x_a); subdividing a
    free circle trades its (p', 0) row for two joint rows.  Excluding the
    new joint row from the target identifies it with the source up to a row
    permutation.
    """
    from .cube import arc_var
    from .mf import exclude_variable
    a, new = joint
    entries = {}
    for bits, vd in source_cube.vertices.items():
        tvd = target_cube.vertices[bits]
        ridx = tvd.row_keys.index(("joint", a, new))
        excluded, wit = exclude_variable(tvd.mf, ridx, var=arc_var(new))
        excluded_keys = [k for i, k in enumerate(tvd.row_keys) if i != ridx]
        # a subdivided free circle leaves ("joint", new, a) where the source
        # had ("circle", a); the excluded row is (p'(x_a), 0) either way
        excluded_keys = [("circle", a) if k == ("joint", new, a) else k
                         for k in excluded_keys]
        perm = {i: excluded_keys.index(k)
                for i, k in enumerate(vd.row_keys)}
        for ci, cl in enumerate(vd.H.classes):
            full = vd.path.include_cocycle(cl.rep)
            relabeled = reorder_chain(full, excluded, perm)
            img = wit.include_cocycle(relabeled)
            coeffs = tvd.H.reduce(tvd.path.project(img))
            for tci, c in coeffs.items():
                entries[(target_cube.basis_index[(bits, tci)],
                         source_cube.basis_index[(bits, ci)])] = c
    return CubeMap(source_cube, target_cube, entries, level_shift=0,
                   name="subdivide")


def saddle_map(source_cube, target_cube, site):
    """The eta block map at the saddle site, vertex by vertex."""
    from .cobordisms import apply_site_map, eta_matrices
    from .cube import arc_var
    x1, x2, x3, x4 = (arc_var(a) for a in site)
    pot = source_cube.potential
    field = source_cube.field

    def per_vertex(bits, full):
        from .mf import koszul
        vd = source_cube.vertices[bits]
        tvd = target_cube.vertices[bits]
        # source site rows: joints (x4->x1): ("joint", a4, a1); (x2->x3)
        a1, a2, a3, a4 = site
        s1 = vd.row_keys.index(("joint", a4, a1))
        s2 = vd.row_keys.index(("joint", a2, a3))
        t1 = tvd.row_keys.index(("joint", a2, a1))
        t2 = tvd.row_keys.index(("joint", a4, a3))
        assert t2 == t1 + 1, "saddle site rows not adjacent in the target"
        # align the source with the target's row order first
        perm = {}
        perm[s1], perm[s2] = t1, t2
        tpos = {k: i for i, k in enumerate(tvd.row_keys)}
        for i, k in enumerate(vd.row_keys):
            if i in (s1, s2):
                continue
            perm[i] = tpos[k]
        mid_rows = list(tvd.mf.rows)
        mid_rows[t1] = vd.mf.rows[s1]
        mid_rows[t2] = vd.mf.rows[s2]
        shift = tvd.mf.gens[0][tvd.mf.index[0][
            tuple(0 for _ in mid_rows)]].shift
        mid = koszul(mid_rows, source_cube.n, field, extra_shift=shift,
                     check=False)
        aligned = reorder_chain(full, mid, perm)
        E0, E1 = eta_matrices(pot, field, x1, x2, x3, x4)
        return apply_site_map(aligned, tvd.mf, (t1, t2), E0, E1, odd=True)

    return CubeMap(source_cube, target_cube,
                   _vertexwise_map(source_cube, target_cube, per_vertex),
                   level_shift=source_cube.n - 1, name="saddle")
