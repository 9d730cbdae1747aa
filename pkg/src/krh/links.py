"""Oriented link diagrams: PD codes, braid words, crossings and components.

A crossing stores the four incident arcs by strand role (under/over, in/out).
The marking slots around a crossing follow the resolution figure: x_k bottom
left, x_l bottom right, x_i top left, x_j top right, with the oriented
smoothing joining k -> i and l -> j.  For a positive crossing the over
strand runs k -> j (bottom-left to top-right); for a negative one it runs
l -> i.  In both cases the oriented smoothing joins under_in -> over_out and
over_in -> under_out.
"""

from __future__ import annotations

import re


class ParseError(ValueError):
    def __init__(self, message, position=None):
        if position is not None:
            message = "%s (at token %d)" % (message, position)
        super().__init__(message)
        self.position = position


class InconsistentOrientation(ParseError):
    pass


class Crossing:
    __slots__ = ("sign", "under_in", "over_in", "under_out", "over_out")

    def __init__(self, sign, under_in, over_in, under_out, over_out):
        self.sign = sign
        self.under_in = under_in
        self.over_in = over_in
        self.under_out = under_out
        self.over_out = over_out

    def slots(self):
        """(i, j, k, l) marking arcs: top-left, top-right, bottom-left, bottom-right."""
        if self.sign > 0:
            return (self.under_out, self.over_out, self.over_in, self.under_in)
        return (self.over_out, self.under_out, self.under_in, self.over_in)

    def __repr__(self):
        return "X%+d(u:%s->%s, o:%s->%s)" % (
            self.sign, self.under_in, self.under_out,
            self.over_in, self.over_out)


class LinkDiagram:
    """Crossings, valence-two joints and free circles; arcs are integer labels.

    A joint (a, b) is a marked point where arc a flows into arc b without a
    crossing; subdivided arcs and Morse saddles produce them.
    """

    def __init__(self, crossings, free_circles=(), name="", joints=()):
        self.crossings = list(crossings)
        self.free_circles = list(free_circles)
        self.joints = [tuple(j) for j in joints]
        self.name = name
        self._trace()

    def _trace(self):
        succ = {}
        for c in self.crossings:
            for a, b in ((c.under_in, c.under_out), (c.over_in, c.over_out)):
                if a in succ:
                    raise InconsistentOrientation(
                        "arc %s leaves two crossings" % a)
                succ[a] = b
        for (a, b) in self.joints:
            if a in succ:
                raise InconsistentOrientation(
                    "arc %s leaves two vertices" % a)
            succ[a] = b
        arcs = sorted(set(succ) | set(succ.values()) | set(self.free_circles))
        comps = []
        seen = set()
        for a in arcs:
            if a in seen or a in self.free_circles:
                continue
            if a not in succ:
                raise InconsistentOrientation("arc %s has no successor" % a)
            cyc = [a]
            seen.add(a)
            cur = succ[a]
            while cur != a:
                if cur in seen or cur not in succ:
                    raise InconsistentOrientation(
                        "arcs do not close up at %s" % cur)
                seen.add(cur)
                cyc.append(cur)
                cur = succ[cur]
            comps.append(cyc)
        for a in self.free_circles:
            comps.append([a])
        self.arcs = arcs
        self.components = comps
        self.successor = succ

    @property
    def writhe(self):
        return sum(c.sign for c in self.crossings)

    def component_of(self, arc):
        for i, comp in enumerate(self.components):
            if arc in comp:
                return i
        raise KeyError(arc)

    def mirror(self):
        """Flip every crossing (over and under strands swap)."""
        return LinkDiagram(
            [Crossing(-c.sign, c.over_in, c.under_in, c.over_out, c.under_out)
             for c in self.crossings],
            self.free_circles, name=self.name + "!", joints=self.joints)

    def fresh_arc(self):
        ints = [a for a in self.arcs if isinstance(a, int)]
        return (max(ints) + 1) if ints else 1

    def subdivide_arc(self, a):
        """Split arc a at a new marked point; returns (diagram, new_label).

        The tail half keeps the label a, the head half gets the new label:
        a joint (a, new) is added and the vertex that a entered now sees the
        new label instead.
        """
        new = self.fresh_arc()
        if a in self.free_circles:
            circles = [c for c in self.free_circles if c != a]
            joints = self.joints + [(a, new), (new, a)]
            return LinkDiagram(self.crossings, circles, self.name,
                               joints), new
        crossings = []
        for c in self.crossings:
            crossings.append(Crossing(
                c.sign,
                new if c.under_in == a else c.under_in,
                new if c.over_in == a else c.over_in,
                c.under_out, c.over_out))
        joints = [((new if x == a else x), y) for (x, y) in self.joints]
        joints.append((a, new))
        return LinkDiagram(crossings, self.free_circles, self.name,
                           joints), new

    def __repr__(self):
        return "LinkDiagram(%s: %d crossings, %d components, w=%d)" % (
            self.name or "?", len(self.crossings), len(self.components),
            self.writhe)


def parse_pd(text):
    """Parse a PD code "X[a,b,c,d] ...".

    Arcs are listed counterclockwise starting with the incoming under strand
    (KnotTheory convention): the under strand runs a -> c; the over strand
    runs d -> b (positive crossing) or b -> d (negative crossing), decided
    globally so that every arc leaves exactly one crossing and enters exactly
    one.  A trailing ``closure`` keyword closes dangling ends numerically:
    each dangling outgoing arc connects to the next dangling incoming arc in
    cyclic label order.
    """
    tokens = text.replace(",", " , ").split()
    tokens = [t for t in text.split() if t]
    quads = []
    closure = False
    for pos, tok in enumerate(tokens):
        if tok.lower() == "closure":
            closure = True
            continue
        m = re.fullmatch(r"X\[(\d+),(\d+),(\d+),(\d+)\]", tok)
        if not m:
            raise ParseError("expected X[a,b,c,d], got %r" % tok, pos)
        quads.append(tuple(int(g) for g in m.groups()))
    if not quads:
        raise ParseError("empty PD code")

    # over-strand direction per crossing: choice True = (d -> b), False = (b -> d)
    n = len(quads)
    best = None

    def try_assign(choices):
        outs = {}
        ins = {}
        for (a, b, c, d), ch in zip(quads, choices):
            oin, oout = (d, b) if ch else (b, d)
            for x in (a, oin):
                ins[x] = ins.get(x, 0) + 1
            for x in (c, oout):
                outs[x] = outs.get(x, 0) + 1
        arcs = set(outs) | set(ins)
        for x in arcs:
            if outs.get(x, 0) > 1 or ins.get(x, 0) > 1:
                return None
        dangling_out = sorted(x for x in arcs if ins.get(x, 0) == 0)
        dangling_in = sorted(x for x in arcs if outs.get(x, 0) == 0)
        if (dangling_out or dangling_in) and not closure:
            return None
        if len(dangling_out) != len(dangling_in):
            return None
        return dangling_out, dangling_in

    import itertools
    for choices in itertools.product((True, False), repeat=n):
        res = try_assign(choices)
        if res is None:
            continue
        best = (choices, res)
        break
    if best is None:
        raise InconsistentOrientation(
            "no consistent orientation of over strands")
    choices, (dangling_out, dangling_in) = best

    ident = {}
    if dangling_out:
        # connect each dangling out to the cyclically next dangling in
        ins_sorted = sorted(dangling_in)
        for o in dangling_out:
            nxt = [i for i in ins_sorted if i > o]
            target = nxt[0] if nxt else ins_sorted[0]
            ident[target] = o
            ins_sorted.remove(target)

    def rep(x):
        while x in ident:
            x = ident[x]
        return x

    crossings = []
    for (a, b, c, d), ch in zip(quads, choices):
        oin, oout = (d, b) if ch else (b, d)
        sign = 1 if ch else -1
        crossings.append(Crossing(sign, rep(a), rep(oin), rep(c), rep(oout)))
    return LinkDiagram(crossings)


def parse_braid(text, strands=None):
    """Closure of a braid word "s1 s2^-1 ...".

    Positive s_k is a positive crossing between strands k and k+1 (the
    strand entering at position k passes over).
    """
    tokens = [t for t in text.split() if t]
    word = []
    for pos, tok in enumerate(tokens):
        m = re.fullmatch(r"s(\d+)(\^-1)?", tok)
        if not m:
            raise ParseError("expected s<k> or s<k>^-1, got %r" % tok, pos)
        word.append((int(m.group(1)), -1 if m.group(2) else 1))
    if not word:
        raise ParseError("empty braid word")
    m = strands or (max(k for k, _ in word) + 1)
    if any(k < 1 or k >= m for k, _ in word):
        raise ParseError("generator index out of range for %d strands" % m)

    next_arc = [m + 1]

    def fresh():
        a = next_arc[0]
        next_arc[0] += 1
        return a

    cur = {p: p + 1 for p in range(m)}  # arcs 1..m at the bottom
    init = dict(cur)
    crossings = []
    for k, e in word:
        lo, hi = k - 1, k
        a_lo, a_hi = cur[lo], cur[hi]
        n_lo, n_hi = fresh(), fresh()
        if e > 0:
            # strand at position k goes over, landing at position k+1... the
            # over strand runs bottom-left to top-right (positive crossing)
            crossings.append(Crossing(1, a_hi, a_lo, n_lo, n_hi))
        else:
            crossings.append(Crossing(-1, a_lo, a_hi, n_hi, n_lo))
        cur[lo], cur[hi] = n_lo, n_hi
    # close up: identify top arcs with bottom arcs
    ident = {}
    free = []
    for p in range(m):
        if cur[p] == init[p]:
            free.append(init[p])
        else:
            ident[cur[p]] = init[p]

    def rep(x):
        while x in ident:
            x = ident[x]
        return x

    crossings = [Crossing(c.sign, rep(c.under_in), rep(c.over_in),
                          rep(c.under_out), rep(c.over_out))
                 for c in crossings]
    return LinkDiagram(crossings, free_circles=free)


def unknot_diagram(kinks=0, kink_sign=1):
    """0-, 1- or 2-crossing unknot diagrams.

    kinks=1 is a single kink of the given sign; kinks=2 carries a positive
    and a negative kink (a Reidemeister I pair) on the same circle.
    """
    if kinks == 0:
        return LinkDiagram([], free_circles=[1], name="unknot0")
    if kinks == 1:
        d = parse_braid("s1" if kink_sign > 0 else "s1^-1")
        d.name = "unknot1" if kink_sign > 0 else "unknot1m"
        return d
    if kinks == 2:
        # at a kink the over and under strands are consecutive arcs
        d = LinkDiagram([Crossing(1, 1, 2, 2, 3),
                         Crossing(-1, 3, 4, 4, 1)], name="unknot2")
        return d
    raise ValueError("only 0, 1 or 2 kinks are bundled")
