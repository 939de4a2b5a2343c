"""Finite-dimensional DGLAs and the nilpotent DGLAs ``Tot(L (x) m(A))``.

Degrees here are cochain degrees.  The bracket table ``bracket[(i, j)]``
holds ``[e_i, e_j]``; the validator checks graded antisymmetry, Jacobi,
Leibniz and ``d^2 = 0``.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product as iproduct
from typing import Mapping, Sequence

from .artin import ArtinCdga, CdgaMap, _free_columns
from .complexes import CochainComplex
from .errors import DimensionError, ValidationError
from .qlinalg import Echelon, RatMatrix, kernel_basis
from .sparse import add_into
from .structure import GradedStructure, normalize_table

__all__ = [
    "DGLA",
    "NilpotentDGLA",
    "DglaMap",
    "GradedAlgebra",
    "abelian_dgla",
    "end_dgla",
    "der_dgla",
    "coefficient_extension",
    "induced_map",
    "dgla_cohomology",
]


def _sgn(parity: int) -> int:
    return -1 if parity & 1 else 1


class DGLA(GradedStructure):
    def __init__(self, labels: Sequence[str], degrees: Sequence[int],
                 bracket: Mapping | None = None, diff: Mapping | None = None,
                 validate: bool = True, name: str | None = None):
        labels = tuple(labels)
        super().__init__(labels, degrees, normalize_table(labels, bracket, 2),
                         normalize_table(labels, diff, 1))
        self.name = name
        if validate:
            self.validate()

    def __repr__(self):
        nm = f"{self.name}: " if self.name else ""
        return f"DGLA({nm}dims {self.dims()})"

    def dims(self) -> dict[int, int]:
        return {n: len(v) for n, v in self.by_degree().items()}

    def bracket(self, x, y) -> dict[int, Fraction]:
        return self.mul(x, y)

    @property
    def is_abelian(self) -> bool:
        return not self.product

    def validate(self):
        """Antisymmetry, Jacobi, Leibniz, d^2 = 0 on basis elements."""
        self.check_d_squared()
        n = self.dim
        e = [{i: Fraction(1)} for i in range(n)]
        par = [self.parity(i) for i in range(n)]
        for (i, j), v in self.product.items():
            back = self.product.get((j, i), {})
            if add_into(dict(v), back, _sgn(par[i] * par[j])):
                raise ValidationError(
                    f"bracket of {self.labels[i]}, {self.labels[j]} is not graded antisymmetric")
        for (j, i), v in self.product.items():
            if (i, j) not in self.product:
                raise ValidationError(
                    f"bracket of {self.labels[i]}, {self.labels[j]} is not graded antisymmetric")
        for i in range(n):
            for j in range(n):
                lhs = self.d(self.product.get((i, j), {}))
                rhs = self.mul(self.d(e[i]), e[j])
                add_into(rhs, self.mul(e[i], self.d(e[j])), _sgn(par[i]))
                if add_into(lhs, rhs, -1):
                    raise ValidationError(
                        f"d is not a derivation on {self.labels[i]}, {self.labels[j]}")
        # [x,[y,z]] = [[x,y],z] + (-1)^{|x||y|} [y,[x,z]]
        for i in range(n):
            for j in range(n):
                xy = self.product.get((i, j), {})
                for k in range(n):
                    yz = self.product.get((j, k))
                    xz = self.product.get((i, k))
                    if not (yz or xz or xy):
                        continue
                    lhs = self.mul(e[i], yz) if yz else {}
                    rhs = self.mul(xy, e[k]) if xy else {}
                    if xz:
                        add_into(rhs, self.mul(e[j], xz), _sgn(par[i] * par[j]))
                    if add_into(lhs, rhs, -1):
                        raise ValidationError(
                            f"Jacobi identity fails on {self.labels[i]}, {self.labels[j]}, "
                            f"{self.labels[k]}")
        return True

    def cohomology(self, n: int):
        """``(dim H^n, representatives as sparse vectors of L)``."""
        c = self.complex(validate=False)
        dim, reps = c.cohomology(n)
        return dim, [self.from_degree_coords(r, n) for r in reps]

    def cocycles(self, n: int) -> list[dict]:
        return [self.from_degree_coords(v, n) for v in kernel_basis(self.differential_matrix(n))]


def dgla_cohomology(L: DGLA, n: int):
    return L.cohomology(n)


def abelian_dgla(c: CochainComplex, name: str | None = None) -> DGLA:
    labels, degs, pos = [], [], {}
    for n in c.degrees:
        for k, x in enumerate(c.space.labels(n)):
            pos[(n, k)] = len(labels)
            labels.append(x)
            degs.append(n)
    if len(set(labels)) != len(labels):
        labels = [f"{x}@{n}" for x, n in zip(labels, degs)]
    diff: dict = {}
    for n in c.degrees:
        for r, col, v in c.d(n).nonzero():
            diff.setdefault(pos[(n, col)], {})[pos[(n + 1, r)]] = v
    return DGLA(labels, degs, {}, diff, name=name)


class DglaMap:
    """Degree-0 map of DGLAs given by images of basis elements."""

    def __init__(self, source: DGLA, target: DGLA, images, check: bool = True):
        self.source = source
        self.target = target
        if isinstance(images, Mapping):
            imgs = [dict() for _ in range(source.dim)]
            for k, v in images.items():
                i = source.index(k) if isinstance(k, str) else int(k)
                imgs[i] = target.vector(v)
            images = imgs
        self.images = [{int(k): Fraction(v) for k, v in im.items() if v} for im in images]
        if len(self.images) != source.dim:
            raise DimensionError("one image per source basis element is required")
        if check:
            self.validate()

    def apply(self, vec) -> dict[int, Fraction]:
        out: dict[int, Fraction] = {}
        for j, c in vec.items():
            add_into(out, self.images[j], c)
        return out

    def validate(self):
        s, t = self.source, self.target
        for j, im in enumerate(self.images):
            for i in im:
                if t.cdeg[i] != s.cdeg[j]:
                    raise ValidationError(f"map does not preserve the degree of {s.labels[j]}")
        for j in range(s.dim):
            e = {j: Fraction(1)}
            if add_into(self.apply(s.d(e)), t.d(self.images[j]), -1):
                raise ValidationError(f"map does not commute with d on {s.labels[j]}")
            for k in range(s.dim):
                lhs = self.apply(s.product.get((j, k), {}))
                if add_into(lhs, t.mul(self.images[j], self.images[k]), -1):
                    raise ValidationError(
                        f"map does not preserve the bracket on {s.labels[j]}, {s.labels[k]}")
        return True


# Tot(L (x) m(A)) -------------------------------------------------------------

class NilpotentDGLA(DGLA):
    """``Tot(L (x) m(A))`` with basis ``e_p (x) a`` (label ``"p.a"``).

    Degree of ``e_p (x) a`` is ``|e_p| - chaindeg(a)``.  Structure maps:
    ``[e_p (x) a, e_q (x) b] = (-1)^{|e_q||a|} [e_p, e_q] (x) ab`` and
    ``d(e_p (x) a) = d e_p (x) a + (-1)^{|e_p|} e_p (x) d a``.
    """

    def __init__(self, L: DGLA, A: ArtinCdga, validate: bool = False):
        pairs = sorted(iproduct(range(L.dim), range(A.dim)),
                       key=lambda pa: (L.cdeg[pa[0]] + A.cdeg[pa[1]], pa))
        self.L = L
        self.A = A
        self.pairs = pairs
        self.pair_index = {pa: k for k, pa in enumerate(pairs)}
        idx = self.pair_index
        labels = [f"{L.labels[p]}.{A.labels[a]}" for p, a in pairs]
        degs = [L.cdeg[p] + A.cdeg[a] for p, a in pairs]
        bracket: dict = {}
        for (p, q), lv in L.product.items():
            for a in range(A.dim):
                for b in range(A.dim):
                    ab = A.product.get((a, b))
                    if not ab:
                        continue
                    sign = _sgn(L.parity(q) * A.parity(a))
                    out = bracket.setdefault((idx[(p, a)], idx[(q, b)]), {})
                    for r, c in lv.items():
                        for s, c2 in ab.items():
                            out[idx[(r, s)]] = out.get(idx[(r, s)], 0) + sign * c * c2
        diff: dict = {}
        for p, a in pairs:
            out = diff.setdefault(idx[(p, a)], {})
            for r, c in L.diff.get(p, {}).items():
                out[idx[(r, a)]] = out.get(idx[(r, a)], 0) + c
            sign = _sgn(L.parity(p))
            for s, c in A.diff.get(a, {}).items():
                out[idx[(p, s)]] = out.get(idx[(p, s)], 0) + sign * c
        super().__init__(labels, degs, bracket, diff, validate=False,
                         name=f"{L.name or 'L'} (x) m({A.name or 'A'})")
        self.nilpotency_index = A.nilpotency_index
        self._filtration: dict[int, list[dict]] = {}
        if validate:
            self.validate()

    def element(self, coeffs: Mapping) -> dict[int, Fraction]:
        """Sparse vector from ``{(L label, A label): c}`` or ``{"p.a": c}``."""
        out: dict[int, Fraction] = {}
        for k, v in coeffs.items():
            if isinstance(k, tuple):
                p = self.L.index(k[0]) if isinstance(k[0], str) else k[0]
                a = self.A.index(k[1]) if isinstance(k[1], str) else k[1]
                i = self.pair_index[(p, a)]
            elif isinstance(k, str):
                i = self.index(k)
            else:
                i = int(k)
            add_into(out, {i: Fraction(v)})
        return out

    def tensor(self, lvec, avec) -> dict[int, Fraction]:
        """``x (x) a`` for ``x`` in L and ``a`` in m(A)."""
        out: dict[int, Fraction] = {}
        for p, c in lvec.items():
            for a, c2 in avec.items():
                add_into(out, {self.pair_index[(p, a)]: c * c2})
        return out

    def filtration(self, k: int) -> list[dict]:
        """Basis of ``F^k = L (x) m(A)^k``."""
        if k <= 1:
            k = 1
        if k in self._filtration:
            return self._filtration[k]
        powers = self.A.powers
        out: list[dict] = []
        if k <= len(powers):
            for p in range(self.L.dim):
                for v in powers[k - 1]:
                    out.append({self.pair_index[(p, a)]: c for a, c in v.items()})
        self._filtration[k] = out
        return out

    def filtration_echelon(self, k: int) -> Echelon:
        ech = Echelon(self.dim, track=False)
        for v in self.filtration(k):
            ech.add(v)
        return ech

    def weight(self, vec) -> int:
        """Largest ``k`` with ``vec`` in ``F^k`` (``nilpotency_index`` for 0)."""
        if not vec:
            return self.nilpotency_index
        w = 0
        for k in range(1, self.nilpotency_index):
            if self.filtration_echelon(k).contains(vec):
                w = k
            else:
                break
        return w

    def in_degree(self, n: int) -> list[int]:
        return self.indices_in_degree(n)


def coefficient_extension(L: DGLA, A: ArtinCdga, validate: bool = True) -> NilpotentDGLA:
    return NilpotentDGLA(L, A, validate=validate)


def induced_map(f: DglaMap | None, g: CdgaMap | None, source: NilpotentDGLA,
                target: NilpotentDGLA, check: bool = True) -> DglaMap:
    """``f (x) g: Tot(L (x) m(A)) -> Tot(M (x) m(B))``; ``None`` means identity."""
    images = []
    for p, a in source.pairs:
        lim = f.images[p] if f is not None else {p: Fraction(1)}
        aim = g.images[a] if g is not None else {a: Fraction(1)}
        images.append(target.tensor(lim, aim))
    return DglaMap(source, target, images, check=check)


# End(V) ----------------------------------------------------------------------

def _flat_complex(V: CochainComplex):
    labels, degs, pos = [], [], {}
    for n in V.degrees:
        for k, x in enumerate(V.space.labels(n)):
            pos[(n, k)] = len(labels)
            labels.append(x)
            degs.append(n)
    if len(set(labels)) != len(labels):
        labels = [f"{x}@{n}" for x, n in zip(labels, degs)]
    dmat: dict[tuple[int, int], Fraction] = {}
    for n in V.degrees:
        for r, c, v in V.d(n).nonzero():
            dmat[(pos[(n + 1, r)], pos[(n, c)])] = v
    return labels, degs, dmat


def _commutator_tables(ops: list[dict], degs: list[int], dv: dict | None):
    """Bracket and ``[d, -]`` tables for a family of homogeneous operators
    given as sparse matrices ``{(row, col): value}``, closed under both."""
    keys = sorted({k for op in ops for k in op})
    kpos = {k: i for i, k in enumerate(keys)}

    def flat(m):
        return {kpos[k]: v for k, v in m.items() if v}

    ech = Echelon(len(keys))
    for op in ops:
        if not ech.add(flat(op)):
            raise ValidationError("operator family is dependent")

    def coords(m):
        if any(k not in kpos for k, v in m.items() if v):
            raise ValidationError("family is not closed under the bracket")
        rem, combo = ech.reduce(flat(m))
        if rem:
            raise ValidationError("family is not closed under the bracket")
        return combo

    def compose(a, b):
        out: dict = {}
        by_row: dict = {}
        for (r, c), v in b.items():
            by_row.setdefault(r, []).append((c, v))
        for (r, m), v in a.items():
            for c, w in by_row.get(m, ()):
                out[(r, c)] = out.get((r, c), 0) + v * w
        return {k: v for k, v in out.items() if v}

    def comm(a, da, b, db):
        out = compose(a, b)
        for k, v in compose(b, a).items():
            out[k] = out.get(k, 0) - _sgn(da * db) * v
        return {k: v for k, v in out.items() if v}

    bracket, diff = {}, {}
    for i, a in enumerate(ops):
        for j, b in enumerate(ops):
            c = comm(a, degs[i], b, degs[j])
            if c:
                bracket[(i, j)] = coords(c)
        if dv:
            c = comm(dv, 1, a, degs[i])
            if c:
                diff[i] = coords(c)
    return bracket, diff


def end_dgla(V: CochainComplex, name: str | None = None) -> DGLA:
    """Graded endomorphisms of ``V``; basis ``E[b,a]`` (the map ``a -> b``)
    in degree ``deg b - deg a``, bracket the graded commutator, ``d = [d_V, -]``."""
    labels, degs, dmat = _flat_complex(V)
    n = len(labels)
    pairs = sorted(((b, a) for b in range(n) for a in range(n)),
                   key=lambda ba: (degs[ba[0]] - degs[ba[1]], ba))
    ops = [{(b, a): Fraction(1)} for b, a in pairs]
    odeg = [degs[b] - degs[a] for b, a in pairs]
    bracket, diff = _commutator_tables(ops, odeg, dmat)
    return DGLA([f"E[{labels[b]},{labels[a]}]" for b, a in pairs], odeg, bracket, diff,
                name=name or "End(V)")


# derivations -------------------------------------------------------------------

FLAVORS = ("associative", "graded-commutative", "lie")


class GradedAlgebra(GradedStructure):
    """Finite-dimensional chain-graded algebra with a structural differential.

    ``flavor`` is one of ``associative``, ``graded-commutative``, ``lie``.
    For the first two a basis element may be declared the unit.
    """

    def __init__(self, labels, chain_degrees, product=None, diff=None,
                 flavor: str = "graded-commutative", unit: str | None = None):
        if flavor not in FLAVORS:
            raise ValueError(f"flavor must be one of {FLAVORS}")
        labels = tuple(labels)
        super().__init__(labels, [-int(i) for i in chain_degrees],
                         normalize_table(labels, product, 2), normalize_table(labels, diff, 1))
        self.flavor = flavor
        self.unit = self.index(unit) if unit is not None else None
        if self.unit is not None:
            if flavor == "lie":
                raise ValidationError("Lie algebras have no unit")
            if self.cdeg[self.unit] != 0:
                raise ValidationError("unit must sit in degree 0")
            u = self.unit
            for i in range(self.dim):
                if i == u:
                    continue
                self.product[(u, i)] = {i: Fraction(1)}
                self.product[(i, u)] = {i: Fraction(1)}
            self.product[(u, u)] = {u: Fraction(1)}
        self.validate()

    def validate(self):
        self.check_d_squared()
        n = self.dim
        e = [{i: Fraction(1)} for i in range(n)]
        for i in range(n):
            for j in range(n):
                ab = self.mul(e[i], e[j])
                pi, pj = self.parity(i), self.parity(j)
                if self.flavor != "associative":
                    ba = self.mul(e[j], e[i])
                    s = _sgn(pi * pj) * (-1 if self.flavor == "lie" else 1)
                    if add_into(dict(ab), ba, -s):
                        raise ValidationError("product fails graded (anti)commutativity")
                rhs = self.mul(self.d(e[i]), e[j])
                add_into(rhs, self.mul(e[i], self.d(e[j])), _sgn(pi))
                if add_into(self.d(ab), rhs, -1):
                    raise ValidationError("structural differential is not a derivation")
                for k in range(n):
                    if self.flavor == "lie":
                        lhs = self.mul(e[i], self.mul(e[j], e[k]))
                        rhs = self.mul(ab, e[k])
                        add_into(rhs, self.mul(e[j], self.mul(e[i], e[k])), _sgn(pi * pj))
                    else:
                        lhs = self.mul(ab, e[k])
                        rhs = self.mul(e[i], self.mul(e[j], e[k]))
                    if add_into(lhs, rhs, -1):
                        raise ValidationError("associativity / Jacobi fails")
        return True

    def _ideal(self):
        if self.unit is None:
            return list(range(self.dim))
        return [i for i in range(self.dim) if i != self.unit]

    def generators(self) -> list[int]:
        """A basis of ``m/m^2`` for local algebras, otherwise every basis
        element except the unit."""
        m = self._ideal()
        if self.flavor == "lie" or self.unit is None:
            return m
        power = [{i: Fraction(1)} for i in m]
        m2 = None
        while power:
            ech = Echelon(self.dim, track=False)
            nxt = []
            for v in power:
                for j in m:
                    p = self.mul(v, {j: Fraction(1)})
                    if self.unit in p:
                        return m  # the complement of the unit is not an ideal
                    if p and ech.add(p):
                        nxt.append(p)
            if len(nxt) >= len(power):
                return m  # not nilpotent, so not local
            if m2 is None:
                m2 = ech
            power = nxt
        if m2 is None:
            m2 = Echelon(self.dim, track=False)
        return [i for i in m if m2.add({i: Fraction(1)})]


def der_dgla(R: GradedAlgebra, name: str | None = None) -> DGLA:
    """Graded derivations of ``R``, solved over a generating set.

    A degree-``n`` derivation lowers chain degree by ``n`` and obeys
    ``D(xy) = D(x) y + (-1)^{n|x|} x D(y)``.  Unknowns are the values on
    generators; values on other basis elements are propagated along words,
    and the Leibniz rule on all basis pairs gives the linear constraints.
    """
    gens = R.generators()
    n = R.dim
    units = {R.unit} if R.unit is not None else set()
    # word basis spanning the non-unit part: (word index, prev word, generator)
    words: list[tuple[dict, int | None, int]] = []
    ech = Echelon(n)
    frontier = []
    for g in gens:
        v = {g: Fraction(1)}
        if ech.add(v):
            words.append((v, None, g))
            frontier.append(len(words) - 1)
    if R.flavor != "lie":
        while frontier:
            nxt = []
            for w in frontier:
                for g in gens:
                    v = R.mul(words[w][0], {g: Fraction(1)})
                    if v and ech.add(v):
                        words.append((v, w, g))
                        nxt.append(len(words) - 1)
            frontier = nxt
    target_space = [i for i in range(n) if i not in units]
    for i in target_space:
        if not ech.contains({i: Fraction(1)}):
            raise ValidationError("generators do not generate the algebra")
    degs = sorted({R.cdeg[i] for i in range(n)})
    shifts = sorted({b - a for a in degs for b in degs})
    ops, odeg, olabels = [], [], []
    for s in shifts:
        # unknowns: coefficient of basis r in D(g), with cdeg r = cdeg g + s
        unknowns = [(g, r) for g in gens for r in range(n) if R.cdeg[r] == R.cdeg[g] + s]
        if not unknowns:
            continue
        upos = {u: k for k, u in enumerate(unknowns)}
        # D(word) as {basis r: {unknown: coeff}}
        dword: list[dict] = []
        for v, prev, g in words:
            val: dict = {}
            if prev is None:
                for (gg, r), k in upos.items():
                    if gg == g:
                        val.setdefault(r, {})[k] = Fraction(1)
            else:
                pv = words[prev][0]
                pdeg = R.vector_degree(pv)
                for r, lin in dword[prev].items():
                    prod = R.mul({r: Fraction(1)}, {g: Fraction(1)})
                    for t, c in prod.items():
                        for k, c2 in lin.items():
                            add_into(val.setdefault(t, {}), {k: c * c2})
                sign = _sgn(s * pdeg)
                for (gg, r), k in upos.items():
                    if gg != g:
                        continue
                    for t, c in R.mul(pv, {r: Fraction(1)}).items():
                        add_into(val.setdefault(t, {}), {k: sign * c})
            dword.append({t: lin for t, lin in val.items() if lin})
        # D on basis elements via word coordinates
        dbasis: list[dict] = []
        for i in range(n):
            if i in units:
                dbasis.append({})
                continue
            _, combo = ech.reduce({i: Fraction(1)})
            val: dict = {}
            for w, c in combo.items():
                for t, lin in dword[w].items():
                    add_into(val.setdefault(t, {}), lin, c)
            dbasis.append({t: lin for t, lin in val.items() if lin})
        # Leibniz constraints on all pairs
        rows: list[dict] = []
        for i in range(n):
            for j in range(n):
                lhs: dict = {}
                for t, c in R.mul({i: Fraction(1)}, {j: Fraction(1)}).items():
                    for u, lin in dbasis[t].items():
                        add_into(lhs.setdefault(u, {}), lin, c)
                for u, lin in dbasis[i].items():
                    for t, c in R.mul({u: Fraction(1)}, {j: Fraction(1)}).items():
                        add_into(lhs.setdefault(t, {}), lin, -c)
                sign = _sgn(s * R.cdeg[i])
                for u, lin in dbasis[j].items():
                    for t, c in R.mul({i: Fraction(1)}, {u: Fraction(1)}).items():
                        add_into(lhs.setdefault(t, {}), lin, -sign * c)
                rows.extend(lin for lin in lhs.values() if lin)
        system = RatMatrix(len(rows), len(unknowns))
        for r, lin in enumerate(rows):
            for k, c in lin.items():
                system._set(r, k, c)
        kb = kernel_basis(system)
        frees = _free_columns([{k: c for k, c in enumerate(v) if c} for v in kb])
        for vec, free in zip(kb, frees):
            op: dict = {}
            for i in range(n):
                for t, lin in dbasis[i].items():
                    c = sum((lin.get(k, 0) * vec[k] for k in lin), Fraction(0))
                    if c:
                        op[(t, i)] = c
            g, r = unknowns[free]
            ops.append(op)
            odeg.append(s)
            olabels.append(f"{R.labels[g]}->{R.labels[r]}")
    if len(set(olabels)) != len(olabels):
        olabels = [f"{x}#{k}" for k, x in enumerate(olabels)]
    dR = {}
    for i, vec in R.diff.items():
        for t, c in vec.items():
            dR[(t, i)] = c
    bracket, diff = _commutator_tables(ops, odeg, dR)
    return DGLA(olabels, odeg, bracket, diff, name=name or "Der(R)")
