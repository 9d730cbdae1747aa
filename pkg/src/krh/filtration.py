"""Finite filtered cochain complexes: homology, Gaussian elimination, pages.

The chain groups are spanned by basis items tagged (cohomological degree,
filtration level); the differential raises cohomological degree by 1 and
never raises the level.  All computations are exact over the coefficient
field; filtration-adapted echelon bases (pivots of maximal level) make
levels of homology classes and spectral-sequence pages plain rank counts.
"""

from __future__ import annotations

from .fields import is_zero
from .laurent import Laurent
from .linalg import Echelon, vec_scale
from .poly import NEG_INF


class PivotNotInvertible(ValueError):
    pass


class PivotNotFiltered(ValueError):
    pass


class FilteredComplex:
    def __init__(self, field, items, d, labels=None, check=True):
        """items: list of (cohdeg, level); d: {(target, source): coeff}."""
        self.field = field
        self.items = list(items)
        self.d = {k: v for k, v in d.items() if not is_zero(v)}
        self.labels = labels or [None] * len(self.items)
        if check:
            self.verify()

    def verify(self):
        for (i, j), c in self.d.items():
            di, li = self.items[i]
            dj, lj = self.items[j]
            if di != dj + 1:
                raise ValueError("differential entry not of cohdegree +1")
            if li > lj:
                raise ValueError("differential raises the filtration")
        # d^2 = 0
        by_col = {}
        for (i, j), c in self.d.items():
            by_col.setdefault(j, []).append((i, c))
        sq = {}
        for (k, j), c in self.d.items():
            for (i, c2) in by_col.get(k, ()):
                key = (i, j)
                s = sq.get(key, self.field.zero) + c2 * c
                if is_zero(s):
                    sq.pop(key, None)
                else:
                    sq[key] = s
        if sq:
            raise ValueError("d^2 != 0 on filtered complex")
        return True

    # -- basic views ------------------------------------------------------------

    def indices_of_degree(self, deg):
        return [i for i, (d, _) in enumerate(self.items) if d == deg]

    def degrees(self):
        return sorted({d for d, _ in self.items})

    def dim(self):
        return len(self.items)

    def apply_d(self, vec):
        out = {}
        by_col = {}
        for (i, j), c in self.d.items():
            by_col.setdefault(j, []).append((i, c))
        for j, x in vec.items():
            for (i, c) in by_col.get(j, ()):
                s = out.get(i, self.field.zero) + c * x
                if is_zero(s):
                    out.pop(i, None)
                else:
                    out[i] = s
        return out

    def _key(self):
        items = self.items

        def key(idx):
            return (items[idx][1], idx)
        return key

    # -- homology -----------------------------------------------------------------

    def homology(self):
        """{cohdeg: [levels]} plus representatives, filtration-adapted."""
        key = self._key()
        result = {}
        reps = {}
        for deg in self.degrees():
            src = self.indices_of_degree(deg)
            below = self.indices_of_degree(deg - 1)
            boundaries = Echelon(key)
            for j in below:
                boundaries.add(self.apply_d({j: self.field.one}))
            cocycles = Echelon(key)
            kernel = []
            for j in src:
                col = self.apply_d({j: self.field.one})
                residue, pay, _ = cocycles.reduce(col, {j: self.field.one})
                if residue:
                    piv = max(residue, key=key)
                    c = residue[piv]
                    cocycles.rows[piv] = (vec_scale(residue, 1 / c),
                                          vec_scale(pay, 1 / c))
                else:
                    kernel.append(pay)
            combined = Echelon(key)
            combined.rows = dict(boundaries.rows)
            levels = []
            rlist = []
            for kv in kernel:
                residue, _, _ = combined.reduce(kv)
                if residue:
                    piv = max(residue, key=key)
                    c = residue[piv]
                    combined.rows[piv] = (vec_scale(residue, 1 / c), {})
                    levels.append(self.items[piv][1])
                    rlist.append(dict(vec_scale(residue, 1 / c)))
            if levels:
                result[deg] = sorted(levels)
                reps[deg] = rlist
        self._homology_reps = reps
        return result

    def poincare(self):
        """{(cohdeg, level): dim} of the homology."""
        out = {}
        for deg, levels in self.homology().items():
            for l in levels:
                out[(deg, l)] = out.get((deg, l), 0) + 1
        return out

    def poincare_polynomial(self):
        """Two-variable table as {cohdeg: Laurent in q}."""
        out = {}
        for (deg, l), m in self.poincare().items():
            out[deg] = out.get(deg, Laurent()) + Laurent({l: m})
        return out

    def total_homology_dimension(self):
        return sum(len(v) for v in self.homology().values())

    def gmax_gmin(self):
        levels = [l for ls in self.homology().values() for l in ls]
        if not levels:
            raise ValueError("homology is zero; no filtration extremes")
        return max(levels), min(levels)

    # -- Gaussian elimination --------------------------------------------------------

    def gaussian_eliminate(self, target, source):
        """Remove an invertible differential entry (the pivot phi).

        The pivot must be a degree-0 isomorphism: nonzero scalar with equal
        filtration levels.  Returns the smaller quasi-isomorphic complex.
        """
        phi = self.d.get((target, source))
        if phi is None or is_zero(phi):
            raise PivotNotInvertible("pivot entry is zero")
        if self.items[target][1] != self.items[source][1]:
            raise PivotNotFiltered(
                "pivot links different filtration levels; its inverse "
                "would raise the filtration")
        keep = [i for i in range(len(self.items))
                if i not in (target, source)]
        renum = {old: new for new, old in enumerate(keep)}
        phi_inv = 1 / phi
        delta = {j: c for (i, j), c in self.d.items()
                 if i == target and j != source}
        gamma = {i: c for (i, j), c in self.d.items()
                 if j == source and i != target}
        nd = {}
        for (i, j), c in self.d.items():
            if i in (target, source) or j in (target, source):
                continue
            nd[(renum[i], renum[j])] = c
        for i, g in gamma.items():
            for j, dl in delta.items():
                key = (renum[i], renum[j])
                s = nd.get(key, self.field.zero) - g * phi_inv * dl
                if is_zero(s):
                    nd.pop(key, None)
                else:
                    nd[key] = s
        return FilteredComplex(self.field, [self.items[i] for i in keep], nd,
                               [self.labels[i] for i in keep], check=False)

    def simplify(self):
        """Eliminate invertible level-preserving entries until none remain."""
        cur = self
        while True:
            pivot = None
            for (i, j), c in cur.d.items():
                if cur.items[i][1] == cur.items[j][1] and not is_zero(c):
                    pivot = (i, j)
                    break
            if pivot is None:
                return cur
            cur = cur.gaussian_eliminate(*pivot)

    # -- spectral sequence -------------------------------------------------------------

    def _span_dim(self, vectors):
        e = Echelon(self._key())
        for v in vectors:
            e.add(v)
        return len(e)

    def _z_basis(self, r, s, deg):
        """Basis of Z_r^{s} in cohdegree deg: x in F^s with dx in F^{s-r}."""
        src = [i for i in self.indices_of_degree(deg)
               if self.items[i][1] <= s]
        key = self._key()
        img = Echelon(key)
        kernel = []
        for j in src:
            col = {i: c for i, c in self.apply_d({j: self.field.one}).items()
                   if self.items[i][1] > s - r}
            residue, pay, _ = img.reduce(col, {j: self.field.one})
            if residue:
                piv = max(residue, key=key)
                c = residue[piv]
                img.rows[piv] = (vec_scale(residue, 1 / c),
                                 vec_scale(pay, 1 / c))
            else:
                kernel.append(pay)
        return kernel

    def level_range(self):
        if not self.items:
            return (0, 0)
        ls = [l for _, l in self.items]
        return min(ls), max(ls)

    def page(self, r):
        """{(cohdeg, level): dim} of E_r (r = None means E_infinity)."""
        lmin, lmax = self.level_range()
        if r is None:
            r = (lmax - lmin) + 1
        out = {}
        for deg in self.degrees():
            for s in range(lmin, lmax + 1):
                z_r = self._z_basis(r, s, deg)
                if not z_r:
                    continue
                denom = self._z_basis(r - 1, s - 1, deg)
                for x in self._z_basis(r - 1, s + r - 1, deg - 1):
                    denom.append(self.apply_d(x))
                all_dim = self._span_dim(z_r + denom)
                den_dim = self._span_dim(denom)
                d = all_dim - den_dim
                if d:
                    out[(deg, s)] = d
        return out

    def pages(self, k_max=None):
        """E_0, E_1, ... until collapse (or k_max); returns list of tables."""
        lmin, lmax = self.level_range()
        spread = max(1, lmax - lmin)
        out = []
        r = 0
        while True:
            out.append(self.page(r))
            if k_max is not None and r >= k_max:
                break
            if r > spread:
                break
            if r >= 1 and out[-1] == self.page(None):
                break
            r += 1
        return out

    def page_map(self, other, f, r, shift=0):
        """Induced map on E_r from a filtered chain map f: self -> other.

        f: {(target_index, source_index): coeff}; ``shift`` is the amount f
        raises filtration levels by (<= shift is required entrywise).
        Returns {(deg, s): matrix as list of rows} mapping E_r^{s} of self
        into E_r^{s+shift} of other.
        """
        for (i, j), c in f.items():
            if not is_zero(c):
                if other.items[i][1] > self.items[j][1] + shift:
                    raise ValueError("map exceeds the stated filtration shift")

        def apply_f(vec):
            out = {}
            by_col = {}
            for (i, j), c in f.items():
                by_col.setdefault(j, []).append((i, c))
            for j, x in vec.items():
                for (i, c) in by_col.get(j, ()):
                    s = out.get(i, other.field.zero) + c * x
                    if is_zero(s):
                        out.pop(i, None)
                    else:
                        out[i] = s
            return out

        result = {}
        lmin, lmax = self.level_range()
        for deg in self.degrees():
            for s in range(lmin, lmax + 1):
                z_r = self._z_basis(r, s, deg)
                denom = self._z_basis(r - 1, s - 1, deg)
                for x in self._z_basis(r - 1, s + r - 1, deg - 1):
                    denom.append(self.apply_d(x))
                key = self._key()
                den_ech = Echelon(key)
                for v in denom:
                    den_ech.add(v)
                reps = []
                for v in z_r:
                    residue, _, _ = den_ech.reduce(v)
                    if residue:
                        den_ech.add(residue)
                        reps.append(v)
                if not reps:
                    continue
                # target page data at level s+shift
                t_z = other._z_basis(r, s + shift, deg)
                t_den = other._z_basis(r - 1, s + shift - 1, deg)
                for x in other._z_basis(r - 1, s + shift + r - 1, deg - 1):
                    t_den.append(other.apply_d(x))
                tkey = other._key()
                t_ech = Echelon(tkey)
                for v in t_den:
                    t_ech.add(v)
                t_reps = []
                for v in t_z:
                    residue, _, _ = t_ech.reduce(v)
                    if residue:
                        piv = max(residue, key=tkey)
                        c = residue[piv]
                        t_ech.rows[piv] = (vec_scale(residue, 1 / c), {})
                        t_reps.append(piv)
                matrix = []
                for v in reps:
                    image = apply_f(v)
                    residue, _, coeffs = t_ech.reduce(image)
                    if residue:
                        raise ValueError(
                            "image not expressible on the target page")
                    row = [coeffs.get(piv, other.field.zero)
                           for piv in t_reps]
                    matrix.append(row)
                result[(deg, s)] = matrix
        return result
