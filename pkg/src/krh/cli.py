"""Command-line front end.

Subcommands: homology, moy-dim, states, pages, invariants, verify.
Exit codes: 0 success, 1 parse error, 2 invalid configuration,
3 computation failure (e.g. unstable truncation).
"""

from __future__ import annotations

import argparse
import os
import sys

from .cohomology import TruncationUnstable
from .fields import rat
from .graphs import GraphStructureError, PlanarGraph, admissible_states
from .laurent import Laurent
from .links import ParseError, parse_braid, parse_pd
from .moy import Irreducible, moy_dimension
from .potential import Potential
from .report import dumps, make_report, poincare_table


class ConfigError(ValueError):
    pass


def _read_maybe_file(text):
    if os.path.exists(text):
        with open(text) as fh:
            return fh.read()
    return text


def load_potential(args):
    if args.n < 2:
        raise ConfigError("--n must be at least 2")
    name = args.potential
    if name == "slN":
        return Potential(args.n)
    if name == "gornik":
        return Potential.gornik(args.n)
    if name.startswith("custom:"):
        coeffs = [c.strip() for c in name[len("custom:"):].split(",")]
        if len(coeffs) != args.n + 1:
            raise ConfigError("custom potential needs c_0..c_n (%d values)"
                              % (args.n + 1))
        table = {}
        for i, c in enumerate(coeffs):
            if "/" in c:
                num, den = c.split("/")
                table[i] = rat(int(num), int(den))
            elif int(c):
                table[i] = rat(int(c))
        return Potential(args.n, table)
    raise ConfigError("unknown potential %r (slN | gornik | custom:c0,..,cn)"
                      % name)


def load_diagram(args):
    if args.pd:
        return parse_pd(_read_maybe_file(args.pd))
    if args.braid:
        return parse_braid(_read_maybe_file(args.braid).strip())
    raise ConfigError("need --pd or --braid")


def load_graph(args):
    if not args.graph:
        raise ConfigError("need --graph")
    return PlanarGraph.from_text(_read_maybe_file(args.graph))


def _apply_truncation(args):
    ceiling = args.truncation
    env = os.environ.get("KRH_MAX_DEGREE")
    if ceiling is None and env:
        ceiling = int(env)
    if ceiling is not None:
        from . import cohomology
        cohomology.MAX_DEGREE_OVERRIDE = ceiling


def cmd_homology(args):
    from .cube import ResolutionCube
    pot = load_potential(args)
    diagram = load_diagram(args)
    cube = ResolutionCube(diagram, pot)
    rec = make_report(diagram, args.n, pot, cube=cube)
    if args.json:
        print(dumps(rec))
    else:
        print("diagram: %s  (%d crossings, %d components, writhe %d)"
              % (rec["diagram"], rec["crossings"], rec["components"],
                 rec["writhe"]))
        print("potential: %s over %s" % (pot, pot.base_field()))
        print("total dimension: %d" % rec["dims"])
        for deg, row in sorted(cube.poincare_polynomial().items()):
            print("  H^%-3d  %s" % (deg, row))
        print("gmax = %d, gmin = %d" % (rec["gmax"], rec["gmin"]))
    return 0


def cmd_moy_dim(args):
    graph = load_graph(args)
    md = moy_dimension(graph, args.n)
    if args.json:
        print(dumps({"n": args.n, "moy_dimension": str(md),
                     "at_q1": md(1)}))
    else:
        print(md)
    return 0


def cmd_states(args):
    graph = load_graph(args)
    states = admissible_states(graph, args.n)
    if args.json:
        print(dumps({"n": args.n, "count": len(states),
                     "states": [{k: v for k, v in sorted(s.items())}
                                for s in states]}))
    else:
        print("%d admissible states" % len(states))
        for s in states:
            print("  " + " ".join("%s=%d" % kv for kv in sorted(s.items())))
    return 0


def cmd_pages(args):
    from .cube import ResolutionCube
    pot = load_potential(args)
    diagram = load_diagram(args)
    cube = ResolutionCube(diagram, pot)
    pages = cube.pages(args.kmax)
    if args.json:
        print(dumps({"n": args.n, "potential": str(pot),
                     "pages": [{"%d,%d" % k: v for k, v in sorted(p.items())}
                               for p in pages],
                     "E_infinity": {"%d,%d" % k: v for k, v in
                                    sorted(cube.page(None).items())}}))
    else:
        for r, p in enumerate(pages):
            print("E_%d:" % r)
            for (deg, lvl), d in sorted(p.items()):
                print("   cohdeg %-3d level %-4d dim %d" % (deg, lvl, d))
        print("E_infinity:")
        for (deg, lvl), d in sorted(cube.page(None).items()):
            print("   cohdeg %-3d level %-4d dim %d" % (deg, lvl, d))
    return 0


def cmd_invariants(args):
    from .cube import ResolutionCube
    from .gornik import GornikBasis, s_invariant, slice_bound_report
    pot = load_potential(args)
    diagram = load_diagram(args)
    cube = ResolutionCube(diagram, pot)
    checks = []
    s_n = None
    if len(diagram.components) == 1 and pot.is_gornik:
        s_n, _ = s_invariant(diagram, args.n, cube=cube)
    if pot.is_gornik:
        gb = GornikBasis(diagram, args.n, cube=cube)
        ok, rep = gb.dimension_check()
        checks.append({"name": "gornik dimension n^m", "pass": ok,
                       "detail": rep})
        if args.surface_chi is not None:
            sb = slice_bound_report(diagram, args.n, args.surface_chi,
                                    cube=cube)
            checks.append({"name": "slice bound g_max >= (n-1)chi",
                           "pass": sb["bound_holds"],
                           "detail": {k: str(v) for k, v in sb.items()}})
    rec = make_report(diagram, args.n, pot, cube=cube, s_n=s_n,
                      checks=checks)
    if args.json:
        print(dumps(rec))
    else:
        print("diagram: %s" % rec["diagram"])
        print("gmax = %d, gmin = %d" % (rec["gmax"], rec["gmin"]))
        if s_n is not None:
            print("s_%d = %s" % (args.n, s_n))
        for c in checks:
            print("  [%s] %s" % ("pass" if c["pass"] else "FAIL", c["name"]))
    if any(not c["pass"] for c in checks):
        return 3
    return 0


def cmd_verify(args):
    from .verify import run_suite
    results = run_suite(args.suite, args.n)
    failed = 0
    for label, ok in results:
        print("[%s] %s" % ("pass" if ok else "FAIL", label))
        if not ok:
            failed += 1
    if args.json:
        print(dumps({"suite": args.suite,
                     "results": [{"name": l, "pass": bool(o)}
                                 for l, o in results]}))
    return 3 if failed else 0


def build_parser():
    p = argparse.ArgumentParser(
        prog="krh",
        description="Exact matrix-factorization link cohomology engine")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, graph=False, diagram=False, n_default=None):
        sp.add_argument("--n", type=int, default=n_default)
        sp.add_argument("--json", action="store_true")
        sp.add_argument("--truncation", type=int, default=None,
                        help="override the engine degree ceiling")
        if diagram:
            sp.add_argument("--pd", help="PD code text or file")
            sp.add_argument("--braid", help="braid word text or file")
            sp.add_argument("--potential", default="slN",
                            help="slN | gornik | custom:c0,..,cn")
        if graph:
            sp.add_argument("--graph", help="graph record text or file")

    sp = sub.add_parser("homology", help="filtered link cohomology")
    common(sp, diagram=True, n_default=2)
    sp.set_defaults(func=cmd_homology)

    sp = sub.add_parser("moy-dim", help="MOY graded dimension of a graph")
    common(sp, graph=True, n_default=2)
    sp.set_defaults(func=cmd_moy_dim)

    sp = sub.add_parser("states", help="admissible states of a graph")
    common(sp, graph=True, n_default=2)
    sp.set_defaults(func=cmd_states)

    sp = sub.add_parser("pages", help="spectral sequence pages")
    common(sp, diagram=True, n_default=2)
    sp.add_argument("--kmax", type=int, default=None)
    sp.set_defaults(func=cmd_pages)

    sp = sub.add_parser("invariants", help="gmax/gmin, s_n, slice bounds")
    common(sp, diagram=True, n_default=2)
    sp.add_argument("--surface-chi", type=int, default=None,
                    help="Euler characteristic of a candidate slice surface")
    sp.set_defaults(func=cmd_invariants)

    sp = sub.add_parser("verify", help="run a named identity suite")
    common(sp)
    sp.add_argument("--suite", required=True,
                    help="moy-consistency | reidemeister | gornik | chi-identities")
    sp.set_defaults(func=cmd_verify)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _apply_truncation(args)
        return args.func(args)
    except (ParseError, GraphStructureError) as e:
        print("parse error: %s" % e, file=sys.stderr)
        return 1
    except (ConfigError, KeyError) as e:
        print("invalid configuration: %s" % e, file=sys.stderr)
        return 2
    except (TruncationUnstable, Irreducible) as e:
        print("computation failed: %s" % e, file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
