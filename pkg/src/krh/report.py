"""JSON-compatible result records and named verification suites."""

from __future__ import annotations

import json
from fractions import Fraction

from .laurent import Laurent


def laurent_str(l):
    return str(l)


def poincare_table(pp):
    """{cohdeg: Laurent} -> {str(cohdeg): {str(level): dim}}."""
    out = {}
    for deg in sorted(pp):
        out[str(deg)] = {str(k): v for k, v in sorted(pp[deg].coeffs.items())}
    return out


def make_report(diagram, n, potential, cube=None, s_n=None, checks=None):
    rec = {
        "diagram": diagram.name or repr(diagram),
        "crossings": len(diagram.crossings),
        "components": len(diagram.components),
        "writhe": diagram.writhe,
        "n": n,
        "potential": str(potential),
    }
    if cube is not None:
        rec["dims"] = cube.total_dimension()
        rec["poincare"] = poincare_table(cube.poincare_polynomial())
        gmax, gmin = cube.gmax_gmin()
        rec["gmax"] = gmax
        rec["gmin"] = gmin
    if s_n is not None:
        rec["s_n"] = str(s_n) if isinstance(s_n, Fraction) else s_n
    rec["checks"] = checks or []
    return rec


def dumps(rec):
    return json.dumps(rec, indent=2, sort_keys=True)


def loads(text):
    return json.loads(text)
