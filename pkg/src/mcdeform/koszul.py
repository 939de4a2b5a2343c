"""Word-length truncations of the bar and cobar constructions.

Bar side.  ``BarTruncation(L, N)`` is the graded-commutative algebra on
generators ``b[p]`` (one per basis element ``e_p`` of ``L``, chain degree
``|e_p| - 1``) modulo words of length ``> N``, with

    d b[p] = -(-1)^{|e_p|} ( sum_q D_pq b[q]
                             + 1/2 sum_{q,r} (-1)^{|e_r|(|e_q|-1)} C^p_qr b[q] b[r] )

where ``d e_q = sum_p D_pq e_p`` and ``[e_q, e_r] = sum_p C^p_qr e_p``.  With
this normalisation a cdga map ``b[p] -> a_p`` commutes with ``d`` exactly
when ``sum_p e_p (x) a_p`` is Maurer-Cartan.

Cobar side.  ``CobarTruncation(A, N)`` is the free graded Lie algebra on
``x_a`` (``a`` a basis element of ``m(A)``, cochain degree
``chaindeg(a) + 1``) modulo brackets of length ``> N``, with

    d x_a = -sum_b (-1)^{|x_b|} delta_ab x_b
            - 1/2 sum_{b,c} (-1)^{|x_c| chaindeg(b)} mu^a_bc [x_b, x_c]

where ``d_A b = sum_a delta_ab a`` and ``b c = sum_a mu^a_bc a``.  A Lie map
``x_a -> w_a`` then commutes with ``d`` exactly when ``sum_a w_a (x) a`` is
Maurer-Cartan.  These sign choices are pinned by ``d^2 = 0``, by the
transport roundtrips and by the ``k[eps_0]`` case, all of which are tested.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Sequence

from .artin import ArtinCdga, CdgaMap
from .complexes import ChainMap, CochainComplex, GradedSpace, cone
from .dgla import DGLA
from .errors import HostMismatchError, InsufficientTruncationError, ValidationError
from .freelie import FreeLie
from .mcgauge import MCElement
from .qlinalg import RatMatrix
from .sparse import add_into

__all__ = [
    "BarTruncation",
    "CobarTruncation",
    "CobarMap",
    "bar_truncation",
    "cobar_truncation",
    "adjunction_transport",
    "mc_to_cobar_map",
    "cobar_map_to_mc",
    "mc_to_bar_map",
    "bar_map_to_mc",
    "bar_compatibility_defect",
    "cobar_compatibility_defect",
    "counit_cone_weight_cohomology",
    "counit_weight_complex",
]


def _sgn(p) -> int:
    return -1 if p % 2 else 1


def _require_order(N: int, A: ArtinCdga):
    need = max(1, A.nilpotency_index - 1)
    if N < need:
        raise InsufficientTruncationError(
            f"truncation order {N} is too small for an algebra of nilpotency "
            f"index {A.nilpotency_index}", need)


# bar ------------------------------------------------------------------------------

class BarTruncation:
    """``beta(L)`` modulo words of length ``> N``.

    Monomials are sorted tuples of basis indices of ``L`` (odd generators at
    most once), ordered by ``(length, tuple)``.  The cdga itself is built on
    first access of :attr:`algebra`.
    """

    def __init__(self, L: DGLA, N: int, validate: bool = True):
        if N < 1:
            raise ValueError("truncation order must be at least 1")
        self.source = L
        self.order = N
        self._validate = validate
        n = L.dim
        self.gpar = [(L.cdeg[p] - 1) & 1 for p in range(n)]
        monos = []
        for k in range(1, N + 1):
            for m in combinations_with_replacement(range(n), k):
                if any(self.gpar[a] and m.count(a) > 1 for a in set(m)):
                    continue
                monos.append(m)
        self.monomials = monos
        self.index = {m: i for i, m in enumerate(monos)}
        self._gen_diff = [self._generator_differential(p) for p in range(n)]
        self._algebra = None

    def chain_degree(self, m) -> int:
        return sum(self.source.cdeg[p] - 1 for p in m)

    def label(self, m) -> str:
        parts = []
        for p in sorted(set(m)):
            c = m.count(p)
            lab = f"b[{self.source.labels[p]}]"
            parts.append(lab if c == 1 else f"{lab}^{c}")
        return "".join(parts)

    # polynomial arithmetic on {monomial: coeff}, truncated at length N
    def mono_mul(self, m1, m2):
        if len(m1) + len(m2) > self.order:
            return 0, None
        sign = 1
        for a in m1:
            if self.gpar[a]:
                for b in m2:
                    if self.gpar[b]:
                        if a == b:
                            return 0, None
                        if a > b:
                            sign = -sign
        return sign, tuple(sorted(m1 + m2))

    def poly_mul(self, x: dict, y: dict) -> dict:
        out: dict = {}
        for m1, c1 in x.items():
            for m2, c2 in y.items():
                s, m = self.mono_mul(m1, m2)
                if s:
                    add_into(out, {m: s * c1 * c2})
        return out

    def _generator_differential(self, p):
        L = self.source
        lin: dict = {}
        quad: dict = {}
        sp = -_sgn(L.cdeg[p])
        for q, vec in L.diff.items():
            c = vec.get(p)
            if c:
                add_into(lin, {(q,): sp * c})
        for (q, r), vec in L.product.items():
            c = vec.get(p)
            if c:
                s = _sgn(L.cdeg[r] * (L.cdeg[q] - 1))
                prod = self.poly_mul({(q,): Fraction(1)}, {(r,): Fraction(1)})
                add_into(quad, prod, sp * s * c / 2)
        return lin, quad

    def derivation(self, m, linear_only: bool = False) -> dict:
        out: dict = {}
        sign = 1
        for j, p in enumerate(m):
            lin, quad = self._gen_diff[p]
            dp = dict(lin)
            if not linear_only:
                add_into(dp, quad)
            if dp:
                term = self.poly_mul(self.poly_mul({m[:j]: Fraction(1)}, dp),
                                     {m[j + 1:]: Fraction(1)})
                add_into(out, term, sign)
            if self.gpar[p]:
                sign = -sign
        return out

    @property
    def algebra(self) -> ArtinCdga:
        if self._algebra is None:
            idx = self.index
            mult, diff = {}, {}
            for i, m1 in enumerate(self.monomials):
                dv = self.derivation(m1)
                if dv:
                    diff[i] = {idx[m]: c for m, c in dv.items()}
                for j, m2 in enumerate(self.monomials):
                    s, m = self.mono_mul(m1, m2)
                    if s:
                        mult[(i, j)] = {idx[m]: Fraction(s)}
            self._algebra = ArtinCdga([self.label(m) for m in self.monomials],
                                      [self.chain_degree(m) for m in self.monomials],
                                      mult, diff, validate=self._validate,
                                      name=f"bar({self.source.name or 'L'},{self.order})")
        return self._algebra

    def quotient_map(self, lower: BarTruncation) -> CdgaMap:
        """The surjection onto a lower truncation of the same DGLA."""
        if lower.order > self.order or not lower.source.same_as(self.source):
            raise ValueError("not a lower truncation of the same DGLA")
        images = [{lower.index[m]: Fraction(1)} if m in lower.index else {}
                  for m in self.monomials]
        return CdgaMap(self.algebra, lower.algebra, images)


def bar_truncation(L: DGLA, N: int, validate: bool = True) -> BarTruncation:
    return BarTruncation(L, N, validate)


# cobar -----------------------------------------------------------------------------

class CobarTruncation:
    """``beta*(A)`` modulo brackets of length ``> N``; :attr:`dgla` is the result."""

    def __init__(self, A: ArtinCdga, N: int, validate: bool = True):
        if N < 1:
            raise ValueError("truncation order must be at least 1")
        self.source = A
        self.order = N
        degs = [A.chain_degree(a) + 1 for a in range(A.dim)]
        self.free = FreeLie(degs, [1] * A.dim, range(1, N + 1),
                            [f"x_{lab}" for lab in A.labels])
        self.gen_diff = [self._generator_differential(a) for a in range(A.dim)]
        F = self.free
        bracket, diff = {}, {}
        for i in range(F.dim):
            dv = F.express(F.derivation(F.elements[i], self.gen_diff))
            if dv:
                diff[i] = dv
            for j in range(F.dim):
                if F.weight[i] + F.weight[j] <= N:
                    b = F.bracket(i, j)
                    if b:
                        bracket[(i, j)] = b
        self.dgla = DGLA([F.label(k) for k in range(F.dim)], F.degree, bracket, diff,
                         validate=validate, name=f"cobar({A.name or 'A'},{N})")
        # generator x_a is the basis element whose tree is (a,)
        self.generator = {F.trees[k][0]: k for k in F.basis_in_weight(1)}

    def _generator_differential(self, a) -> dict:
        A, F = self.source, self.free
        out: dict = {}
        for b, vec in A.diff.items():
            c = vec.get(a)
            if c:
                add_into(out, {(b,): -_sgn(F.gdeg[b]) * c})
        for (b, c_), vec in A.product.items():
            mu = vec.get(a)
            if mu:
                s = _sgn(F.gdeg[c_] * A.chain_degree(b))
                br = F.commutator({(b,): Fraction(1)}, F.gdeg[b], {(c_,): Fraction(1)}, F.gdeg[c_])
                add_into(out, br, -s * mu / 2)
        return out


def cobar_truncation(A: ArtinCdga, N: int, validate: bool = True) -> CobarTruncation:
    return CobarTruncation(A, N, validate)


class CobarMap:
    """Lie map ``CobarTruncation(A, N) -> L`` fixed by the images of ``x_a``.

    Validated as a truncated DGLA map: brackets are respected whenever the
    bracket survives the truncation, and ``d`` is respected on basis
    elements of length ``<= max(1, N - 1)``.
    """

    def __init__(self, cobar: CobarTruncation, target: DGLA, gen_images: Sequence[dict],
                 check: bool = True):
        self.cobar = cobar
        self.target = target
        self.gen_images = [{int(k): Fraction(v) for k, v in im.items() if v}
                           for im in gen_images]
        F = cobar.free
        self.images = [F.evaluate(k, self.gen_images, target.bracket) for k in range(F.dim)]
        if check:
            self.validate()

    def apply(self, vec) -> dict:
        out: dict = {}
        for k, c in vec.items():
            add_into(out, self.images[k], c)
        return out

    def validate(self):
        defect = self.defects()
        if defect:
            raise ValidationError(f"not a DGLA map: {defect[0]}")
        return True

    def defects(self) -> list[str]:
        F, L, C = self.cobar.free, self.target, self.cobar.dgla
        out = []
        for k, im in enumerate(self.images):
            for i in im:
                if L.cdeg[i] != F.degree[k]:
                    out.append(f"degree of the image of {C.labels[k]}")
        top = max(1, self.cobar.order - 1)
        for k in range(F.dim):
            if F.weight[k] > top:
                continue
            lhs = self.apply(C.d({k: Fraction(1)}))
            if add_into(lhs, L.d(self.images[k]), -1):
                out.append(f"d on {C.labels[k]}")
        for i in range(F.dim):
            for j in range(F.dim):
                if F.weight[i] + F.weight[j] > self.cobar.order:
                    continue
                lhs = self.apply(C.product.get((i, j), {}))
                if add_into(lhs, L.bracket(self.images[i], self.images[j]), -1):
                    out.append(f"bracket on {C.labels[i]}, {C.labels[j]}")
        return out


# transports ----------------------------------------------------------------------

def _components(omega: MCElement):
    """``{a: w_a}`` with ``omega = sum_a w_a (x) a``, and ``{p: a_p}`` with
    ``omega = sum_p e_p (x) a_p``."""
    N = omega.host
    by_a: dict = {}
    by_p: dict = {}
    for k, c in omega.coeffs.items():
        p, a = N.pairs[k]
        add_into(by_a.setdefault(a, {}), {p: c})
        add_into(by_p.setdefault(p, {}), {a: c})
    return by_a, by_p


def _check_source(omega, L, A):
    if not omega.host.L.same_as(L) or not omega.host.A.same_as(A):
        raise HostMismatchError("element lives over a different (L, A)")


def mc_to_cobar_map(omega: MCElement, cobar: CobarTruncation, check: bool = True) -> CobarMap:
    """Direction (a): generator ``x_a`` goes to the ``a``-component of omega."""
    A = cobar.source
    L = omega.host.L
    _check_source(omega, L, A)
    _require_order(cobar.order, A)
    by_a, _ = _components(omega)
    return CobarMap(cobar, L, [by_a.get(a, {}) for a in range(A.dim)], check=check)


def cobar_map_to_mc(f: CobarMap, host) -> MCElement:
    """Direction (b)."""
    if not host.A.same_as(f.cobar.source) or not host.L.same_as(f.target):
        raise HostMismatchError("host does not match the map")
    coeffs: dict = {}
    for a, im in enumerate(f.gen_images):
        for p, c in im.items():
            add_into(coeffs, {host.pair_index[(p, a)]: c})
    return MCElement(host, coeffs)


def mc_to_bar_map(omega: MCElement, bar: BarTruncation, check: bool = True) -> CdgaMap:
    """Direction (c): ``b[p]`` goes to ``a_p``; monomials to products."""
    A = omega.host.A
    _check_source(omega, bar.source, A)
    _require_order(bar.order, A)
    _, by_p = _components(omega)
    images = []
    for m in bar.monomials:
        val = by_p.get(m[0], {})
        for p in m[1:]:
            val = A.mul(val, by_p.get(p, {}))
        images.append(val)
    return CdgaMap(bar.algebra, A, images, check=check)


def bar_map_to_mc(f: CdgaMap, bar: BarTruncation, host) -> MCElement:
    """Direction (d)."""
    if not host.A.same_as(f.target) or not host.L.same_as(bar.source):
        raise HostMismatchError("host does not match the map")
    coeffs: dict = {}
    for p in range(bar.source.dim):
        for a, c in f.images[bar.index[(p,)]].items():
            add_into(coeffs, {host.pair_index[(p, a)]: c})
    return MCElement(host, coeffs)


def bar_compatibility_defect(omega: MCElement, bar: BarTruncation) -> dict:
    """``{p: f(d b[p]) - d f(b[p])}`` for the generator assignment of omega
    (no MC assumption); equals ``-(-1)^{|e_p|}`` times the ``e_p``-component
    of the MC residual."""
    A = omega.host.A
    f = mc_to_bar_map(omega, bar, check=False)
    out = {}
    for p in range(bar.source.dim):
        g = bar.index[(p,)]
        val = f.apply(bar.algebra.d({g: Fraction(1)}))
        add_into(val, A.d(f.images[g]), -1)
        if val:
            out[p] = val
    return out


def cobar_compatibility_defect(omega: MCElement, cobar: CobarTruncation) -> dict:
    """``{a: f(d x_a) - d f(x_a)}``; equals minus the ``a``-component of the
    MC residual."""
    f = mc_to_cobar_map(omega, cobar, check=False)
    L = f.target
    out = {}
    for a, k in cobar.generator.items():
        val = f.apply(cobar.dgla.d({k: Fraction(1)}))
        add_into(val, L.d(f.images[k]), -1)
        if val:
            out[a] = val
    return out


def adjunction_transport(datum, direction: str, target):
    """Dispatch the four bijections through ``mc(L, A)``.

    ``direction`` is ``"a"`` (MC element to cobar map; ``target`` a
    :class:`CobarTruncation`), ``"b"`` (cobar map to MC; ``target`` the
    host), ``"c"`` (MC element to bar map; ``target`` a
    :class:`BarTruncation`) or ``"d"`` (bar map to MC; ``target`` a pair
    ``(bar, host)``).
    """
    if direction == "a":
        return mc_to_cobar_map(datum, target)
    if direction == "b":
        return cobar_map_to_mc(datum, target)
    if direction == "c":
        return mc_to_bar_map(datum, target)
    if direction == "d":
        bar, host = target
        return bar_map_to_mc(datum, bar, host)
    raise ValueError("direction must be one of a, b, c, d")


# counit --------------------------------------------------------------------------

def counit_weight_complex(L: DGLA, w: int, N: int) -> CochainComplex:
    """Weight-``w`` piece of the associated graded of ``cone(beta* beta L -> L)``.

    The weight of a bracket of generators ``x_M`` (``M`` a bar monomial) is
    the sum of the lengths of the ``M``.  The cobar differential lowers
    weight by at most one (through the quadratic part of the bar
    differential); the associated graded keeps the dual of the linear bar
    differential and the dual of the multiplication.  The counit sends
    ``x_{b[p]}`` to ``e_p`` and everything of weight ``>= 2`` to zero, so
    only weight 1 involves ``L``.
    """
    if w < 1:
        raise ValueError("weight must be positive")
    if N < w:
        raise InsufficientTruncationError("weight exceeds the bar truncation order", w)
    bar = BarTruncation(L, N, validate=False)
    monos = [m for m in bar.monomials if len(m) <= w]
    gidx = {m: i for i, m in enumerate(monos)}
    gdeg = [bar.chain_degree(m) + 1 for m in monos]
    F = FreeLie(gdeg, [len(m) for m in monos], [w], [bar.label(m) for m in monos])
    images: list[dict] = [{} for _ in monos]
    for b, Mp in enumerate(monos):
        for M, c in bar.derivation(Mp, linear_only=True).items():
            add_into(images[gidx[M]], {(b,): -_sgn(gdeg[b]) * c})
    for b, M1 in enumerate(monos):
        for c_, M2 in enumerate(monos):
            if len(M1) + len(M2) > w:
                continue
            s, M = bar.mono_mul(M1, M2)
            if s:
                sign = _sgn(gdeg[c_] * bar.chain_degree(M1))
                br = F.commutator({(b,): Fraction(1)}, gdeg[b], {(c_,): Fraction(1)}, gdeg[c_])
                add_into(images[gidx[M]], br, Fraction(-sign * s, 2))
    basis = F.basis_in_weight(w)
    bydeg: dict[int, list[int]] = {}
    for k in basis:
        bydeg.setdefault(F.degree[k], []).append(k)
    pos = {k: (F.degree[k], i) for n, ks in bydeg.items() for i, k in enumerate(ks)}
    space = GradedSpace({n: [F.label(k) for k in ks] for n, ks in bydeg.items()})
    diff: dict[int, RatMatrix] = {}
    for n, ks in bydeg.items():
        m = RatMatrix(len(bydeg.get(n + 1, [])), len(ks))
        for c, k in enumerate(ks):
            for j, v in F.express(F.derivation(F.elements[k], images)).items():
                dn, r = pos[j]
                if dn != n + 1:
                    raise ValidationError("differential is not of degree one")  # pragma: no cover
                m._set(r, c, v)
        diff[n] = m
    X = CochainComplex(space, diff)
    if w > 1:
        return X
    Lc = L.complex(validate=False)
    maps = {}
    for n, ks in bydeg.items():
        tgt = L.indices_in_degree(n)
        tpos = {i: r for r, i in enumerate(tgt)}
        m = RatMatrix(len(tgt), len(ks))
        for c, k in enumerate(ks):
            p = monos[F.trees[k][0]][0]
            m._set(tpos[p], c, Fraction(1))
        maps[n] = m
    return cone(ChainMap(X, Lc, maps))


def counit_cone_weight_cohomology(L: DGLA, w: int, N: int | None = None,
                                  compare_next: bool = True) -> dict[int, int]:
    """Nonzero cohomology dimensions of the weight-``w`` piece of the counit
    cone (empty dict means acyclic).  With ``compare_next`` the computation
    is repeated at order ``N + 1`` and required to agree."""
    N = w if N is None else N
    c = counit_weight_complex(L, w, N)
    dims = c.betti()
    if compare_next:
        c2 = counit_weight_complex(L, w, N + 1)
        if c2.space != c.space or c2.betti() != dims:
            raise ValidationError("weight piece depends on the truncation order")  # pragma: no cover
    return dims
