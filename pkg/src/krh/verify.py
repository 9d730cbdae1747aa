"""Named verification suites driven by the command line front end."""

from __future__ import annotations

from .fields import is_zero
from .graphs import PlanarGraph, admissible_states, graph_cohomology
from .laurent import Laurent
from .links import parse_braid, unknot_diagram
from .moy import moy_dimension
from .potential import Potential
from .poly import Poly

qi = Laurent.quantum_integer


def corpus_graphs():
    return {
        "circle": PlanarGraph(circles=["x"]),
        "reduction1": PlanarGraph(wides=[("c", "l", "c", "l")]),
        "reduction2": PlanarGraph(wides=[("x5", "x6", "a", "b"),
                                         ("a", "b", "x5", "x6")]),
        "gammahat": PlanarGraph(wides=[("x1", "x2", "x3", "x4"),
                                       ("x3", "x4", "x1", "x2")]),
    }


def reduction4_family():
    """Closed-up versions of the four graphs of the MOY IV relation.

    The local legs (x1..x3 in, x4..x6 out) are closed by parallel strands
    x4 -> x1 (edge e1), x5 -> x2 (e2), x6 -> x3 (e3).
    """
    g1 = PlanarGraph(wides=[("x8", "x7", "e3", "e2"),
                            ("x9", "e1", "x7", "e1"),
                            ("e3", "e2", "x8", "x9")])
    g3 = PlanarGraph(wides=[("x7", "x8", "e2", "e1"),
                            ("e3", "x9", "e3", "x7"),
                            ("e2", "e1", "x9", "x8")])
    g2 = PlanarGraph(wides=[("e2", "e1", "e2", "e1")], circles=["e3"])
    g4 = PlanarGraph(wides=[("e3", "e2", "e3", "e2")], circles=["e1"])
    return g1, g2, g3, g4


def suite_chi_identities(n_values=(2,), report=None):
    """chi_1 chi_0 = (x_k - x_j) id etc. as symbolic matrix identities."""
    from .cobordisms import (apply_site_map, xi_matrices, xi_source_rows,
                             wide_rows)
    from .cube import chi_matrices
    from .mf import ChainMap, KoszulRow, koszul
    out = []
    for pot in (Potential(2), Potential(2, {1: -3}), Potential(3)):
        n = pot.n
        field = pot.base_field()
        xs = {v: Poly.var(v, field) for v in ("x1", "x2", "x3", "x4")}
        g0 = koszul([KoszulRow(pot.pi("x1", "x3", field), xs["x1"] - xs["x3"]),
                     KoszulRow(pot.pi("x2", "x4", field), xs["x2"] - xs["x4"])],
                    n, field)
        g1 = koszul(wide_rows(pot, field, "x1", "x2", "x3", "x4"), n, field,
                    extra_shift=-1)
        v0 = koszul(xi_source_rows(pot, field, "x1", "x2", "x3", "x4"),
                    n, field)

        def as_map(src, tgt, mats):
            f0, f1 = {}, {}
            for par, f in ((0, f0), (1, f1)):
                for j in range(len(src.gens[par])):
                    img = apply_site_map(src.gen_chain(par, j), tgt, (0, 1),
                                         *mats)
                    for i, poly in img.comps.items():
                        f[(i, j)] = poly
            return ChainMap(src, tgt, f0, f1)

        chi0 = as_map(g0, g1, chi_matrices(pot, field, "x1", "x2", "x3", "x4", 0))
        chi1 = as_map(g1, g0, chi_matrices(pot, field, "x1", "x2", "x3", "x4", 1))
        xi0 = as_map(v0, g1, xi_matrices(pot, field, "x1", "x2", "x3", "x4", 0))
        xi1 = as_map(g1, v0, xi_matrices(pot, field, "x1", "x2", "x3", "x4", 1))
        xkxj = xs["x3"] - xs["x2"]
        xlxj = xs["x4"] - xs["x2"]
        checks = [
            ("chi maps are chain maps",
             chi0.is_chain_map() and chi1.is_chain_map()),
            ("xi maps are chain maps",
             xi0.is_chain_map() and xi1.is_chain_map()),
        ]
        for name, comp, space, mult in (
                ("chi1 chi0 = (x_k-x_j) id", chi1.compose(chi0), g0, xkxj),
                ("chi0 chi1 = (x_k-x_j) id", chi0.compose(chi1), g1, xkxj),
                ("xi1 xi0 = (x_l-x_j) id", xi1.compose(xi0), v0, xlxj),
                ("xi0 xi1 = (x_l-x_j) id", xi0.compose(xi1), g1, xlxj)):
            ok = True
            for par in (0, 1):
                for j in range(len(space.gens[par])):
                    ch = space.gen_chain(par, j)
                    if comp.apply(ch).comps != ch.times_poly(mult).comps:
                        ok = False
            checks.append(("%s [p=%s]" % (name, pot), ok))
        out.extend(checks)
    return out


def suite_moy_consistency(n_values=(2, 3)):
    out = []
    graphs = corpus_graphs()
    expected = {
        "circle": lambda n: qi(n),
        "reduction1": lambda n: qi(n) * qi(n - 1),
        "reduction2": lambda n: qi(2) * qi(n) * qi(n - 1),
        "gammahat": lambda n: qi(2) * qi(n) * qi(n - 1),
    }
    for n in n_values:
        pot = Potential.gornik(n)
        for name, g in graphs.items():
            md = moy_dimension(g, n)
            out.append(("moy(%s, n=%d) = %s" % (name, n, expected[name](n)),
                        md == expected[name](n)))
            gc = graph_cohomology(g, pot)
            out.append(("H_p(%s, n=%d) filtered dim = moy" % (name, n),
                        gc.filtered_dimension() == md))
            st = admissible_states(g, n)
            out.append(("states(%s, n=%d) count = moy(1)" % (name, n),
                        len(st) == md(1)))
    # MOY IV at dimension level on the closed reduction-4 family
    from .moy import _moy_four_step
    for n in n_values:
        g1, g2, g3, g4 = reduction4_family()
        lhs = moy_dimension(g1, n) + moy_dimension(g2, n)
        rhs = moy_dimension(g3, n) + moy_dimension(g4, n)
        out.append(("MOY IV: [G1]+[G2] = [G3]+[G4] (n=%d)" % n, lhs == rhs))
        # the rewrite rule itself evaluates consistently on G1
        step = _moy_four_step(g1, n)
        ok = step is not None
        if ok:
            total = Laurent()
            for coeff, sub in step:
                total = total + coeff * moy_dimension(sub, n)
            ok = total == moy_dimension(g1, n)
        out.append(("MOY IV rewrite consistent on G1 (n=%d)" % n, ok))
    return out


def suite_reidemeister(n=2, gornik=False):
    from .cube import ResolutionCube
    out = []
    pot = Potential.gornik(n) if gornik else Potential(n)
    tables = []
    names = []
    for d in (unknot_diagram(0), unknot_diagram(1), unknot_diagram(2),
              unknot_diagram(1, kink_sign=-1)):
        cube = ResolutionCube(d, pot)
        tables.append(cube.poincare_polynomial())
        names.append(d.name)
    ok = all(t == tables[0] for t in tables)
    out.append(("unknot diagrams agree (n=%d, %s)" % (n, pot), ok))
    t1 = ResolutionCube(parse_braid("s1 s2 s1 s1"), pot)
    t2 = ResolutionCube(parse_braid("s2 s1 s2 s1"), pot)
    out.append(("RIII trefoil pair agrees (n=%d, %s)" % (n, pot),
                t1.poincare_polynomial() == t2.poincare_polynomial()))
    return out


def suite_gornik(n=2):
    from .gornik import GornikBasis
    out = []
    for word, name in ((None, "unknot"), ("s1 s1", "hopf")):
        d = unknot_diagram(0) if word is None else parse_braid(word)
        gb = GornikBasis(d, n)
        ok, rep = gb.dimension_check()
        out.append(("gornik basis %s n=%d: dim %d = %d, independent"
                    % (name, n, rep["dimension"], rep["expected"]), ok))
    return out


SUITES = {
    "chi-identities": lambda n: suite_chi_identities(),
    "moy-consistency": lambda n: suite_moy_consistency((2, 3) if n is None
                                                       else (n,)),
    "reidemeister": lambda n: suite_reidemeister(n or 2),
    "gornik": lambda n: suite_gornik(n or 2),
}


def run_suite(name, n=None):
    if name not in SUITES:
        raise KeyError("unknown suite %r; available: %s"
                       % (name, ", ".join(sorted(SUITES))))
    return SUITES[name](n)
