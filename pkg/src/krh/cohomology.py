"""Cohomology of 0-potential matrix factorizations with quantum filtration.

Two engines compute ker d / im d of a Z2-periodic complex of free modules
over a polynomial ring:

* ``LayeredEngine`` splits the differential into homogeneous layers by the
  quantum degree they raise.  The top layer is the homogeneous (x^{n+1})
  theory, computed exactly degree by degree; for a deformed potential every
  homogeneous cocycle is corrected downward, degree step by degree step, to
  an exact cocycle of the full differential.  This realizes the isomorphism
  between the associated graded of the deformed cohomology and the
  homogeneous cohomology, and yields a filtration-adapted basis with exact
  representatives.  It applies whenever the top-layer cohomology sits in a
  single Z2 parity (true for every closed-graph factorization).

* ``TruncationEngine`` is the blunt instrument: chain groups truncated at a
  quantum degree ceiling, kernels and images as echelon bases with
  degree-ordered pivots, and acceptance only when two successive ceilings
  agree (and the certificate matches, when one is available).

A certificate is the expected total graded dimension (a Laurent polynomial);
for closed MOY graphs the rewrite engine supplies it.
"""

from __future__ import annotations

import itertools

from .fields import is_zero
from .laurent import Laurent
from .linalg import Echelon, vec_scale
from .mf import Chain
from .poly import NEG_INF, Poly, mono_degree


MAX_DEGREE_OVERRIDE = None  # set via the CLI --truncation / KRH_MAX_DEGREE


class TruncationUnstable(RuntimeError):
    """Graded dimensions failed to stabilize or contradict the certificate."""


class NotCocycle(ValueError):
    pass


class CohomologyClass:
    __slots__ = ("index", "parity", "level", "rep")

    def __init__(self, index, parity, level, rep):
        self.index = index
        self.parity = parity
        self.level = level
        self.rep = rep

    def __repr__(self):
        return "h%d[par %d, level %d]" % (self.index, self.parity, self.level)


def _monomials(nvars, total):
    """All exponent tuples of length nvars summing to total."""
    if nvars == 0:
        return [()] if total == 0 else []
    out = []
    for head in range(total + 1):
        for rest in _monomials(nvars - 1, total - head):
            out.append((head,) + rest)
    return out


class _SliceData:
    __slots__ = ("img", "kernel")

    def __init__(self, img, kernel):
        self.img = img        # Echelon of top-layer image *into* the next slice
        self.kernel = kernel  # list of kernel vectors of the top layer


class LayeredEngine:
    """Exact degreewise engine (homogeneous theory + downward correction)."""

    def __init__(self, mf, certificate=None, max_degree=None, window=None):
        self.mf = mf
        self.field = mf.field
        self.vars = mf.variables
        self.certificate = certificate
        n = mf.n
        self._split_layers()
        self.window = window if window is not None else 2 * (n + 1)
        shifts = [g.shift for p in (0, 1) for g in mf.gens[p]]
        self.qmin = min(shifts) if shifts else 0
        if certificate is not None and certificate:
            self.qmax = certificate.max_degree()
        elif max_degree is not None:
            self.qmax = max_degree
        elif MAX_DEGREE_OVERRIDE is not None:
            self.qmax = MAX_DEGREE_OVERRIDE
        else:
            self.qmax = (max(shifts) if shifts else 0) + \
                2 * n * max(1, len(self.vars)) + 2 * (n + 1)
        self._pairs = {}     # source slice -> _SliceData
        self._h = {}         # slice -> Echelon of harmonic representatives
        self._bases = {}
        self._classes = None

    # -- layer decomposition ------------------------------------------------

    def _split_layers(self):
        mf = self.mf
        raises = set()
        self._top_terms = ({}, {})
        self._entry_terms = ({}, {})
        for p in (0, 1):
            for (i, j), poly in mf.d[p].items():
                src = mf.gens[p][j]
                tgt = mf.gens[1 - p][i]
                for m, c in poly.terms.items():
                    r = mono_degree(m) + tgt.shift - src.shift
                    raises.add(r)
                    self._entry_terms[p].setdefault(j, []).append((i, m, c, r))
        self.raises = sorted(raises)
        self.top_raise = self.raises[-1] if raises else mf.n + 1
        self.homogeneous = len(self.raises) <= 1
        for p in (0, 1):
            for j, terms in self._entry_terms[p].items():
                tops = [(i, m, c) for (i, m, c, r) in terms
                        if r == self.top_raise]
                if tops:
                    self._top_terms[p][j] = tops

    # -- slice bases ----------------------------------------------------------

    def basis(self, parity, q):
        key = (parity, q)
        if key not in self._bases:
            out = []
            for j, g in enumerate(self.mf.gens[parity]):
                d = q - g.shift
                if d < 0 or d % 2:
                    continue
                for expt in _monomials(len(self.vars), d // 2):
                    out.append((j, expt))
            self._bases[key] = (out, {b: k for k, b in enumerate(out)})
        return self._bases[key]

    def _expt(self, mono):
        e = dict(mono)
        return tuple(e.get(v, 0) for v in self.vars)

    def _mono(self, expt):
        return tuple((v, e) for v, e in zip(self.vars, expt) if e)

    def chain_slice_vec(self, chain, q):
        """Coordinates of the degree-q homogeneous part of a chain."""
        out = {}
        gens = self.mf.gens[chain.parity]
        for j, poly in chain.comps.items():
            want = q - gens[j].shift
            for m, c in poly.terms.items():
                if mono_degree(m) == want:
                    out[(j, self._expt(m))] = c
        return out

    def vec_to_chain(self, vec, parity):
        comps = {}
        for (j, expt), c in vec.items():
            mono = self._mono(expt)
            if j in comps:
                comps[j] = comps[j] + Poly(self.field, {mono: c})
            else:
                comps[j] = Poly(self.field, {mono: c})
        return Chain(self.mf, parity, comps)

    def apply_top(self, vec, parity):
        out = {}
        terms = self._top_terms[parity]
        for (j, expt), coeff in vec.items():
            for (i, m, c) in terms.get(j, ()):
                e = dict(m)
                key = (i, tuple(x + e.get(v, 0)
                                for x, v in zip(expt, self.vars)))
                s = out.get(key)
                cc = c * coeff
                s = cc if s is None else s + cc
                if is_zero(s):
                    out.pop(key, None)
                else:
                    out[key] = s
        return out

    # -- per-slice elimination -------------------------------------------------

    def _process(self, parity, q):
        """Echelonize top-layer columns out of slice (parity, q)."""
        key = (parity, q)
        if key in self._pairs:
            return self._pairs[key]
        basis, _ = self.basis(parity, q)
        img = Echelon()
        kernel = []
        for b in basis:
            col = self.apply_top({b: self.field.one}, parity)
            residue, pay, _ = img.reduce(col, {b: self.field.one})
            if residue:
                piv = max(residue)
                c = residue[piv]
                inv = 1 / c
                img.rows[piv] = (vec_scale(residue, inv), vec_scale(pay, inv))
            else:
                kernel.append(pay)
        data = _SliceData(img, kernel)
        self._pairs[key] = data
        return data

    def image_into(self, parity, q):
        """Echelon of the top-layer image inside slice (parity, q)."""
        return self._process(1 - parity, q - self.top_raise).img

    def harmonic(self, parity, q):
        """Combined echelon (image rows + class rows) and the class pivots.

        Class representatives are kernel vectors fully reduced against the
        image *and* previously chosen classes, so they are canonical in the
        quotient; image rows keep their preimage payloads.
        """
        key = (parity, q)
        if key not in self._h:
            img = self.image_into(parity, q)
            combined = Echelon()
            combined.rows = dict(img.rows)
            class_pivots = []
            for k in self._process(parity, q).kernel:
                residue, _, _ = combined.reduce(k)
                if residue:
                    piv = max(residue, key=combined.key)
                    c = residue[piv]
                    combined.rows[piv] = (vec_scale(residue, 1 / c), {})
                    class_pivots.append(piv)
            self._h[key] = (combined, class_pivots)
        return self._h[key]

    def top_dimension(self, parity, q):
        return len(self.harmonic(parity, q)[1])

    # -- homogeneous (top-layer) data -------------------------------------------

    def top_graded_dimensions(self):
        """{(parity, q): dim} of the top-layer cohomology over the scan range."""
        dims = {}
        for q in range(self.qmin, self.qmax + 1):
            for parity in (0, 1):
                d = self.top_dimension(parity, q)
                if d:
                    dims[(parity, q)] = d
        for q in range(self.qmax + 1, self.qmax + self.window + 1):
            for parity in (0, 1):
                if self.top_dimension(parity, q):
                    raise TruncationUnstable(
                        "top-layer cohomology persists above the degree bound "
                        "(q=%d); supply a certificate or raise the bound" % q)
        if self.certificate is not None:
            got = Laurent()
            for (parity, q), d in dims.items():
                got = got + Laurent({q: d})
            if got != self.certificate:
                raise TruncationUnstable(
                    "graded dimensions %s disagree with certificate %s"
                    % (got, self.certificate))
        return dims

    # -- deformed classes ---------------------------------------------------------

    def _split_top(self, vec, parity, q):
        """Write a closed slice vector as class part + d_top(preimage).

        Returns (class_coeffs {pivot: c}, preimage vector, residue).  A
        nonzero residue means the vector was not closed (or the engine's
        degree window is wrong).
        """
        combined, class_pivots = self.harmonic(parity, q)
        cps = set(class_pivots)
        residue, pay, coeffs = combined.reduce(vec)
        class_coeffs = {p: c for p, c in coeffs.items()
                        if p in cps and not is_zero(c)}
        preimage = {k: -c for k, c in pay.items()}
        return class_coeffs, preimage, residue

    def lift(self, alpha_vec, parity, q):
        """Correct a top-layer cocycle downward to an exact cocycle."""
        z = self.vec_to_chain(alpha_vec, parity)
        if self.homogeneous:
            return z
        while True:
            dz = self.mf.apply_d(z)
            if not dz.comps:
                return z
            t = dz.degree()
            wt = self.chain_slice_vec(dz, t)
            cls, pre, residue = self._split_top(wt, 1 - parity, t)
            if residue or cls:
                raise TruncationUnstable(
                    "correction obstructed at degree %d (top-layer cohomology "
                    "is not confined to one parity?)" % t)
            u = self.vec_to_chain(pre, parity)
            z = z - u

    def classes(self):
        if self._classes is not None:
            return self._classes
        dims = self.top_graded_dimensions()
        parities = {p for (p, _) in dims}
        if not self.homogeneous and len(parities) > 1:
            raise TruncationUnstable(
                "deformed correction needs single-parity top cohomology")
        out = []
        self._class_index = {}
        for (parity, q) in sorted(dims, key=lambda k: (k[1], k[0])):
            combined, class_pivots = self.harmonic(parity, q)
            for piv in class_pivots:
                vec, _ = combined.rows[piv]
                self._class_index[(parity, q, piv)] = len(out)
                rep = self.lift(dict(vec), parity, q)
                out.append(CohomologyClass(len(out), parity, q, rep))
        self._classes = out
        return out

    # -- reduction of arbitrary cocycles -------------------------------------------

    def reduce(self, chain, check=True, stop_at_first=False):
        """Express a cocycle in the class basis: {class_index: coeff}.

        With ``stop_at_first`` returns the filtration level instead (the
        degree at which the first nonzero class coefficient appears).
        """
        if check and self.mf.apply_d(chain).comps:
            raise NotCocycle("chain is not closed")
        self.classes()
        coeffs = {}
        z = chain
        while z.comps:
            t = z.degree()
            parity = z.parity
            wt = self.chain_slice_vec(z, t)
            cls, pre, residue = self._split_top(wt, parity, t)
            if residue:
                raise NotCocycle("top part not expressible at degree %d" % t)
            if cls and stop_at_first:
                return t
            for piv, c in cls.items():
                idx = self._class_index[(parity, t, piv)]
                coeffs[idx] = coeffs.get(idx, self.field.zero) + c
                z = z - self._classes[idx].rep.scale(c)
            if pre:
                u = self.vec_to_chain(pre, 1 - parity)
                z = z - self.mf.apply_d(u)
        if stop_at_first:
            return NEG_INF
        return {k: v for k, v in coeffs.items() if not is_zero(v)}

    def filtration_level(self, chain, check=True):
        return self.reduce(chain, check=check, stop_at_first=True)


class TruncationEngine:
    """Spec-basic engine: truncate at quantum degree N, echelonize, stabilize."""

    def __init__(self, mf, certificate=None, start_degree=None, ceiling=None):
        self.mf = mf
        self.field = mf.field
        self.vars = mf.variables
        n = mf.n
        shifts = [g.shift for p in (0, 1) for g in mf.gens[p]]
        spread = (max(shifts) - min(shifts)) if shifts else 0
        self.qmin = min(shifts) if shifts else 0
        if start_degree is None:
            start_degree = 2 * n * max(1, len(self.vars)) + spread + 2 * (n + 1)
        self.step = 2 * (n + 1)
        self.ceiling = ceiling or MAX_DEGREE_OVERRIDE or \
            (start_degree + 4 * self.step)
        self.certificate = certificate
        self.N = start_degree
        self._layered = LayeredEngine(mf)  # reuse slice bases only
        self._stabilize()

    def _dims_at(self, N):
        data = {}
        for parity in (0, 1):
            data[parity] = self._compute_parity(parity, N)
        return data

    def _basis_upto(self, parity, N):
        out = []
        for q in range(self.qmin, N + 1):
            for b in self._layered.basis(parity, q)[0]:
                out.append((q, b))
        return out

    def _compute_parity(self, parity, N):
        mf = self.mf
        eng = self._layered

        def key(coord):
            return coord  # coord = (q, (gen, expt)): degree-major ordering

        boundaries = Echelon(key)
        for (q, b) in self._basis_upto(1 - parity, N):
            col = mf.apply_d(eng.vec_to_chain({b: self.field.one}, 1 - parity))
            boundaries.add(self._chain_to_coords(col))
        cocycles = Echelon(key)
        kernel = []
        for (q, b) in self._basis_upto(parity, N):
            ch = eng.vec_to_chain({b: self.field.one}, parity)
            col = self._chain_to_coords(mf.apply_d(ch))
            residue, pay, _ = cocycles.reduce(col, {(q, b): self.field.one})
            if residue:
                piv = max(residue, key=key)
                c = residue[piv]
                cocycles.rows[piv] = (vec_scale(residue, 1 / c),
                                      vec_scale(pay, 1 / c))
            else:
                kernel.append(pay)
        # quotient by boundaries: one combined echelon, class pivots tracked
        combined = Echelon(key)
        combined.rows = dict(boundaries.rows)
        class_pivots = []
        for kv in kernel:
            residue, _, _ = combined.reduce(kv)
            if residue:
                piv = max(residue, key=key)
                c = residue[piv]
                combined.rows[piv] = (vec_scale(residue, 1 / c), {})
                class_pivots.append(piv)
        return combined, class_pivots

    def _chain_to_coords(self, chain):
        out = {}
        gens = self.mf.gens[chain.parity]
        eng = self._layered
        for j, poly in chain.comps.items():
            for m, c in poly.terms.items():
                q = mono_degree(m) + gens[j].shift
                out[(q, (j, eng._expt(m)))] = c
        return out

    def _filtered_dims(self, data):
        dims = {}
        for parity in (0, 1):
            _, class_pivots = data[parity]
            for piv in class_pivots:
                q = piv[0]
                dims[(parity, q)] = dims.get((parity, q), 0) + 1
        return dims

    def _stabilize(self):
        prev = None
        while True:
            data = self._dims_at(self.N)
            dims = self._filtered_dims(data)
            if prev is not None and dims == prev:
                break
            if self.N + self.step > self.ceiling:
                raise TruncationUnstable(
                    "dimensions did not stabilize below ceiling %d" % self.ceiling)
            prev = dims
            self.N += self.step
        if self.certificate is not None:
            got = Laurent()
            for (parity, q), d in dims.items():
                got = got + Laurent({q: d})
            if got != self.certificate:
                raise TruncationUnstable(
                    "truncated dimensions %s disagree with certificate %s"
                    % (got, self.certificate))
        self.data = data
        self.dims = dims

    def classes(self):
        out = []
        eng = self._layered
        self._class_index = {}
        for parity in (0, 1):
            combined, class_pivots = self.data[parity]
            for piv in sorted(class_pivots):
                vec, _ = combined.rows[piv]
                comps = {}
                for (q, (j, expt)), c in vec.items():
                    poly = Poly(self.field, {eng._mono(expt): c})
                    comps[j] = comps[j] + poly if j in comps else poly
                rep = Chain(self.mf, parity, comps)
                self._class_index[(parity, piv)] = len(out)
                out.append(CohomologyClass(len(out), parity, piv[0], rep))
        return out

    def reduce(self, chain, check=True, stop_at_first=False):
        if check and self.mf.apply_d(chain).comps:
            raise NotCocycle("chain is not closed")
        if not hasattr(self, "_class_index"):
            self.classes()
        combined, class_pivots = self.data[chain.parity]
        cps = set(class_pivots)
        vec = self._chain_to_coords(chain)
        residue, _, coeffs = combined.reduce(vec)
        if residue:
            raise NotCocycle("cocycle not expressible within truncation")
        out = {}
        level = NEG_INF
        for piv, c in coeffs.items():
            if piv in cps and not is_zero(c):
                out[self._class_index[(chain.parity, piv)]] = c
                level = max(level, piv[0])
        if stop_at_first:
            return level
        return out

    def filtration_level(self, chain, check=True):
        return self.reduce(chain, check=check, stop_at_first=True)


class MFCohomology:
    """Filtered cohomology of a 0-potential factorization."""

    def __init__(self, mf, certificate=None, engine=None, max_degree=None):
        if mf.w:
            raise ValueError("cohomology requires potential 0")
        self.mf = mf
        if engine == "truncation":
            self.engine = TruncationEngine(mf, certificate)
        elif engine in (None, "auto", "layered"):
            try:
                eng = LayeredEngine(mf, certificate, max_degree=max_degree)
                eng.classes()
                self.engine = eng
            except TruncationUnstable:
                if engine == "layered":
                    raise
                self.engine = TruncationEngine(mf, certificate)
        else:
            raise ValueError("unknown engine %r" % engine)
        self.classes = self.engine.classes()

    @property
    def dim(self):
        return len(self.classes)

    def filtered_dimension(self):
        out = Laurent()
        for c in self.classes:
            out = out + Laurent({c.level: 1})
        return out

    def parities(self):
        return sorted({c.parity for c in self.classes})

    def reduce(self, chain, check=True):
        return self.engine.reduce(chain, check=check)

    def filtration_level(self, chain, check=True):
        return self.engine.filtration_level(chain, check=check)

    def class_chain(self, coeffs):
        """Linear combination of class representatives."""
        out = None
        for idx, c in coeffs.items():
            term = self.classes[idx].rep.scale(c)
            out = term if out is None else out + term
        return out


class MFModel:
    """A factorization bundled with its linear reduction and cohomology.

    Convenience wrapper used wherever chain maps are transported between
    factorizations: lift class representatives to the full Koszul model,
    push chains back down, and reduce cocycles against the class basis.
    """

    def __init__(self, full_mf, certificate=None, engine=None):
        from .mf import reduce_linear_rows
        self.full = full_mf
        self.reduced, self.path = reduce_linear_rows(full_mf)
        self.H = MFCohomology(self.reduced, certificate=certificate,
                              engine=engine)
        self.field = full_mf.field

    @property
    def classes(self):
        return self.H.classes

    @property
    def dim(self):
        return self.H.dim

    def filtered_dimension(self):
        return self.H.filtered_dimension()

    def lift_full(self, chain_or_index):
        if isinstance(chain_or_index, int):
            chain_or_index = self.H.classes[chain_or_index].rep
        return self.path.include_cocycle(chain_or_index)

    def project(self, chain):
        return self.path.project(chain)

    def reduce_full(self, chain, check=True):
        return self.H.reduce(self.project(chain), check=check)

    def level_full(self, chain, check=True):
        return self.H.filtration_level(self.project(chain), check=check)
