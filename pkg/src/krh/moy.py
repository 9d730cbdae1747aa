"""MOY graded-dimension rewrite engine.

Evaluates the graded dimension of the graph cohomology of a closed MOY
graph by local rewrites, each an isomorphism of (filtered) cohomologies:

  circle        Gamma u O          = [n] . Gamma
  decomp. I     loop on wide edge  = [n-1] . (edge fused through)
  decomp. II    double edge A=>B   = [2]  . (single wide edge)
  decomp. III   square A<=>B       = (parallel reconnect) + [n-2] . (turnback)
  decomp. IV    3-chain            = mirror 3-chain + one-wide - other-wide
  triple edge   T                  = (chain of three wide edges) - (wide u strand)

Rules I-III plus circle removal suffice for every resolution graph of a
braid-like diagram; IV is only attempted when nothing else applies, with a
recursion guard.  Rewrites are chosen greedily and any successful reduction
is accepted: the target is an isomorphism invariant.
"""

from __future__ import annotations

import itertools

from .laurent import Laurent


class Irreducible(RuntimeError):
    """Graph not simplifiable by the rewrite rules; carries the stuck graph."""

    def __init__(self, graph):
        super().__init__("MOY rules do not apply to:\n%s" % graph.to_text())
        self.graph = graph


def _fresh_namer(graph):
    counter = itertools.count()
    existing = set(graph.edges())

    def fresh(tag="y"):
        while True:
            name = "%s%d" % (tag, next(counter))
            if name not in existing:
                existing.add(name)
                return name
    return fresh


def _replace_graph(graph, drop_wides=(), drop_triples=(), drop_circles=(),
                   add_wides=(), add_triples=(), add_circles=(), fuse=()):
    """Rebuild a graph with nodes removed and edge pairs fused.

    ``fuse`` is a list of (incoming_edge, outgoing_edge): the head of the
    incoming edge and the tail of the outgoing edge were attached to removed
    nodes; the two edges become one (or a free circle if they coincide).
    """
    from .graphs import PlanarGraph
    wides = [w for i, w in enumerate(graph.wides) if i not in drop_wides]
    triples = [t for i, t in enumerate(graph.triples) if i not in drop_triples]
    circles = [c for c in graph.circles if c not in drop_circles]
    wides += list(add_wides)
    triples += list(add_triples)
    circles += list(add_circles)

    # resolve fusion chains: incoming -> outgoing means "rename outgoing to
    # incoming", following chains until stable
    rename = {}
    succ = {a: b for (a, b) in fuse}
    involved = set(succ) | set(succ.values())
    heads = [a for a in succ if a not in succ.values()]
    new_circles = []
    seen = set()
    for h in heads:
        chain = [h]
        cur = h
        while cur in succ:
            cur = succ[cur]
            chain.append(cur)
        for other in chain[1:]:
            rename[other] = h
        seen.update(chain)
    # pure cycles among fused edges become free circles
    for a in succ:
        if a in seen:
            continue
        cyc = [a]
        cur = succ[a]
        while cur != a:
            cyc.append(cur)
            cur = succ[cur]
        seen.update(cyc)
        new_circles.append(a)
        for other in cyc[1:]:
            rename[other] = a

    def ren(e):
        return rename.get(e, e)

    wides = [tuple(ren(x) for x in w) for w in wides]
    triples = [tuple(tuple(ren(x) for x in half) for half in t)
               for t in triples]
    circles = [ren(c) for c in circles] + new_circles
    return PlanarGraph(wides, triples, circles)


def _moy_step(graph, n):
    """One applicable rewrite: list of (Laurent coefficient, smaller graph)."""
    # 0: free circle
    if graph.circles:
        c = graph.circles[0]
        return [(Laurent.quantum_integer(n),
                 _replace_graph(graph, drop_circles=(c,)))]

    # I: a wide edge with a loop from one of its outs to one of its ins
    for w, (o1, o2, i1, i2) in enumerate(graph.wides):
        for o, i, oo, oi in ((o1, i1, o2, i2), (o1, i2, o2, i1),
                             (o2, i1, o1, i2), (o2, i2, o1, i1)):
            if o == i:
                # loop edge o; fuse remaining in-edge through to out-edge
                return [(Laurent.quantum_integer(n - 1),
                         _replace_graph(graph, drop_wides=(w,),
                                        fuse=((oi, oo),)))]

    # II: both outs of A are both ins of B (A != B)
    for a, (ao1, ao2, ai1, ai2) in enumerate(graph.wides):
        for b, (bo1, bo2, bi1, bi2) in enumerate(graph.wides):
            if a == b:
                continue
            if {ao1, ao2} == {bi1, bi2}:
                new_wide = (bo1, bo2, ai1, ai2)
                return [(Laurent.quantum_integer(2),
                         _replace_graph(graph, drop_wides={a, b},
                                        add_wides=(new_wide,)))]

    # III: exactly one edge A -> B and one edge B -> A (the square)
    for a, (ao1, ao2, ai1, ai2) in enumerate(graph.wides):
        for b, (bo1, bo2, bi1, bi2) in enumerate(graph.wides):
            if a == b:
                continue
            down = [e for e in (ao1, ao2) if e in (bi1, bi2)]
            up = [e for e in (bo1, bo2) if e in (ai1, ai2)]
            if len(down) == 1 and len(up) == 1:
                e_ab, e_ba = down[0], up[0]
                q = ao1 if ao2 == e_ab else ao2   # A's other out
                p = ai1 if ai2 == e_ba else ai2   # A's other in
                s = bo1 if bo2 == e_ba else bo2   # B's other out
                r = bi1 if bi2 == e_ab else bi2   # B's other in
                gamma2 = _replace_graph(graph, drop_wides={a, b},
                                        fuse=((r, q), (p, s)))
                gamma1 = _replace_graph(graph, drop_wides={a, b},
                                        fuse=((p, q), (r, s)))
                out = [(Laurent.one(), gamma2)]
                if n >= 3:
                    out.append((Laurent.quantum_integer(n - 2), gamma1))
                return out

    # triple edge: replace by a chain of three wide edges minus a turnback
    if graph.triples:
        t = 0
        (os, is_) = graph.triples[t]
        o1, o2, o3 = os
        i1, i2, i3 = is_
        fresh = _fresh_namer(graph)
        ea, eb, ec = fresh(), fresh(), fresh()
        chain = _replace_graph(
            graph, drop_triples=(t,),
            add_wides=((ea, eb, i1, i2),       # W1: in i1,i2  out a,b
                       (ec, o3, eb, i3),       # W2: in b,i3   out c,o3
                       (o1, o2, ea, ec)))      # W3: in a,c    out o1,o2
        turnback = _replace_graph(
            graph, drop_triples=(t,),
            add_wides=((o1, o2, i1, i2),), fuse=((i3, o3),))
        return [(Laurent.one(), chain), (Laurent({0: -1}), turnback)]

    return None


def _moy_four_step(graph, n):
    """Decomposition IV: left-leaning 3-chain -> mirror + two one-wide graphs.

    Returns a list of (coefficient, graph) or None.  Only used when nothing
    else applies.
    """
    for w1, (a_o1, a_o2, a_i1, a_i2) in enumerate(graph.wides):
        for w2, (b_o1, b_o2, b_i1, b_i2) in enumerate(graph.wides):
            if w2 == w1:
                continue
            for w3, (c_o1, c_o2, c_i1, c_i2) in enumerate(graph.wides):
                if w3 in (w1, w2):
                    continue
                # W1 --x7--> W2, W1 --x8--> W3, W2 --x9--> W3 (any ports)
                outs1, ins2 = {a_o1, a_o2}, {b_i1, b_i2}
                ins3, outs2 = {c_i1, c_i2}, {b_o1, b_o2}
                x7s = outs1 & ins2
                x8s = outs1 & ins3
                x9s = outs2 & ins3
                if not (len(x7s) == 1 and len(x8s) == 1 and len(x9s) == 1):
                    continue
                x7, x8, x9 = x7s.pop(), x8s.pop(), x9s.pop()
                if x7 == x8 or {x8, x9} != ins3:
                    continue
                x3, x2 = a_i1, a_i2
                x1 = b_i1 if b_i2 == x7 else b_i2
                x4 = b_o1 if b_o2 == x9 else b_o2
                x6, x5 = c_o1, c_o2
                fresh = _fresh_namer(graph)
                fa, fb, fc = fresh(), fresh(), fresh()
                gamma3 = _replace_graph(
                    graph, drop_wides={w1, w2, w3},
                    add_wides=((fb, fa, x2, x1),
                               (x6, fc, x3, fb),
                               (x5, x4, fc, fa)))
                gamma4 = _replace_graph(
                    graph, drop_wides={w1, w2, w3},
                    add_wides=((x6, x5, x3, x2),), fuse=((x1, x4),))
                gamma2 = _replace_graph(
                    graph, drop_wides={w1, w2, w3},
                    add_wides=((x5, x4, x2, x1),), fuse=((x3, x6),))
                return [(Laurent.one(), gamma3),
                        (Laurent.one(), gamma4),
                        (Laurent({0: -1}), gamma2)]
    return None


def moy_dimension(graph, n, _depth=0):
    """Graded dimension of H_n(graph) (= filtered dimension of H_p)."""
    if _depth > 64:
        raise Irreducible(graph)
    if not graph.edges():
        return Laurent.one()
    step = _moy_step(graph, n)
    if step is None:
        step = _moy_four_step(graph, n)
    if step is None:
        raise Irreducible(graph)
    total = Laurent()
    for coeff, sub in step:
        total = total + coeff * moy_dimension(sub, n, _depth + 1)
    return total
