"""Cells of the MC nerve, gauge one-simplices, bigraded Artinian algebras.

A nerve cell over the ``n``-simplex is a degree-1 element of
``Tot(L (x) Omega(Delta^n)) (x) m(A)``, stored as ``{(k, form_key): c}`` where
``k`` indexes the basis ``e_p (x) a`` of ``N = L (x) m(A)`` and ``form_key``
is a de Rham monomial.  The tensor order is ``e_p (x) f (x) a`` with

    d(e_p f a)      = (d e_p) f a + (-1)^{|p|} e_p (df) a + (-1)^{|p|+|f|} e_p f (da)
    [e_p f a, e_q g b] = (-1)^{|f||q| + (|q|+|g|)|a|} [e_p, e_q] (fg) (ab)

Bigraded objects carry a cochain degree ``i >= 0`` and a chain degree
``j >= 0``; ``ab = (-1)^{i_a i_b + j_a j_b} ba``, ``delta`` raises ``i`` and
``partial`` lowers ``j``, both derivations with respect to their own degree,
and they commute.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Mapping, Sequence

from .artin import ArtinCdga, CdgaMap
from .derham import DeRhamForm, _mono_d, _mono_mul
from .dgla import DGLA, NilpotentDGLA, coefficient_extension
from .errors import DimensionError, HostMismatchError, ValidationError
from .mcgauge import GaugeElement, MCElement, _square_zero_algebra, gauge_act
from .sparse import add_into

__all__ = [
    "NerveCell",
    "mc_check_on_simplex",
    "gauge_one_simplex",
    "nerve_pi_square_zero",
    "BigradedArtin",
    "BigradedMap",
    "tot_bigraded_artin",
    "tot_bigraded_map",
    "CosimplicialArtin",
    "denormalize",
    "denormalize_map",
    "surjections",
]


def _sgn(p) -> int:
    return -1 if p % 2 else 1


# nerve cells -----------------------------------------------------------------------

class NerveCell:
    def __init__(self, host: NilpotentDGLA, n: int, terms: Mapping | None = None):
        self.host = host
        self.n = n
        clean: dict = {}
        for (k, (exps, dts)), c in (terms or {}).items():
            exps, dts = tuple(exps), tuple(dts)
            DeRhamForm(n, {(exps, dts): 1})  # shape check
            if host.cdeg[k] + len(dts) != 1:
                raise DimensionError("a nerve cell must have total degree 1")
            if c:
                add_into(clean, {(k, (exps, dts)): Fraction(c)})
        self.terms = clean

    @classmethod
    def constant(cls, omega: MCElement, n: int = 0) -> NerveCell:
        key = ((0,) * n, ())
        return cls(omega.host, n, {(k, key): c for k, c in omega.coeffs.items()})

    def __eq__(self, other):
        return isinstance(other, NerveCell) and other.host is self.host and \
            other.n == self.n and other.terms == self.terms

    def __repr__(self):
        parts = []
        for (k, m), c in sorted(self.terms.items()):
            f = repr(DeRhamForm(self.n, {m: 1}))
            parts.append(f"{c}*{self.host.labels[k]}<{f}>")
        return " + ".join(parts) or "0"

    def _map_forms(self, fn, n_new) -> NerveCell:
        out: dict = {}
        for (k, m), c in self.terms.items():
            for m2, c2 in fn(DeRhamForm(self.n, {m: c})).terms.items():
                add_into(out, {(k, m2): c2})
        return NerveCell(self.host, n_new, out)

    def face(self, i: int) -> NerveCell:
        if self.n == 0 or not 0 <= i <= self.n:
            raise IndexError(f"face {i} does not exist on the {self.n}-simplex")
        return self._map_forms(lambda f: f.face(i), self.n - 1)

    def degeneracy(self, i: int) -> NerveCell:
        if not 0 <= i <= self.n:
            raise IndexError(f"degeneracy {i} does not exist on the {self.n}-simplex")
        return self._map_forms(lambda f: f.degeneracy(i), self.n + 1)

    def vertex(self, v: int) -> MCElement:
        """Restriction to vertex ``v`` as an element of ``L (x) m(A)``."""
        if not 0 <= v <= self.n:
            raise IndexError(f"vertex {v} does not exist on the {self.n}-simplex")
        cell = self
        while cell.n:
            cell = cell.face(0) if v > 0 else cell.face(cell.n)
            v = v - 1 if v > 0 else 0
        return MCElement(self.host, {k: c for (k, _), c in cell.terms.items()})

    # dg Lie structure ------------------------------------------------------------

    def _d(self) -> dict:
        N = self.host
        L, A = N.L, N.A
        out: dict = {}
        for (k, m), c in self.terms.items():
            p, a = N.pairs[k]
            pp, fdeg = L.parity(p), len(m[1])
            for r, cr in L.diff.get(p, {}).items():
                add_into(out, {(N.pair_index[(r, a)], m): c * cr})
            for m2, c2 in _mono_d(m).items():
                add_into(out, {(k, m2): _sgn(pp) * c * c2})
            for b, cb in A.diff.get(a, {}).items():
                add_into(out, {(N.pair_index[(p, b)], m): _sgn(pp + fdeg) * c * cb})
        return out

    def _bracket(self, x: dict, y: dict) -> dict:
        N = self.host
        L, A = N.L, N.A
        out: dict = {}
        for (k1, m1), c1 in x.items():
            p, a = N.pairs[k1]
            f1, pa = len(m1[1]), A.parity(a)
            for (k2, m2), c2 in y.items():
                q, b = N.pairs[k2]
                br = L.product.get((p, q))
                ab = A.product.get((a, b))
                if not br or not ab:
                    continue
                s, m = _mono_mul(m1, m2)
                if not s:
                    continue
                g2, pq = len(m2[1]), L.parity(q)
                sign = s * _sgn(f1 * pq + (pq + g2) * pa)
                for r, cr in br.items():
                    for e, ce in ab.items():
                        add_into(out, {(N.pair_index[(r, e)], m): sign * c1 * c2 * cr * ce})
        return out

    def residual(self) -> dict:
        out = self._d()
        add_into(out, self._bracket(self.terms, self.terms), Fraction(1, 2))
        return out

    def is_mc(self) -> bool:
        return not self.residual()


def mc_check_on_simplex(cell: NerveCell):
    """``(certified, residual)``; the residual is ``{(k, form_key): c}``."""
    r = cell.residual()
    return not r, r


def _integrate_t(terms: dict) -> dict:
    """Antiderivative in ``t`` (vanishing at 0) of dt-free polynomial terms on the 1-simplex."""
    out: dict = {}
    for (k, ((e,), dts)), c in terms.items():
        add_into(out, {(k, ((e + 1,), ())): c / (e + 1)})
    return out


def gauge_one_simplex(omega: MCElement, x: GaugeElement) -> NerveCell:
    """The MC cell ``omega(t) + x dt`` on the 1-simplex joining ``omega`` to ``x . omega``.

    The ``dt`` part is ``x`` with the sign ``-(-1)^{|e_p|}`` on the component
    along ``e_p (x) a``: this places ``x`` so that the flow equation reads
    ``omega' = [x, omega] - dx``, whose time-one value is the gauge action.
    ``omega(t)`` is found by Picard iteration, which stops because each
    round raises the filtration weight.  Vertex 0 (``t = 0``, face 1) is
    ``omega``; vertex 1 (face 0) is ``gauge_act(x, omega)``.  Both are
    asserted.
    """
    if x.host is not omega.host:
        raise HostMismatchError("element and gauge element live in different hosts")
    N = omega.host
    dt = ((0,), (1,))
    flow = {(k, dt): -_sgn(N.L.parity(N.pairs[k][0])) * c for k, c in x.coeffs.items()}
    start = {(k, ((0,), ())): c for k, c in omega.coeffs.items()}
    poly = dict(start)
    for _ in range(N.nilpotency_index + 2):
        terms = dict(poly)
        add_into(terms, flow)
        cell = NerveCell(N, 1, terms)
        r = cell.residual()
        rdt = {key: c for key, c in r.items() if key[1][1]}
        if not rdt:
            break
        # the dt part of d(e_p f(t) a) is (-1)^{|p|} e_p f'(t) dt a; cancel R_dt
        corr = {(k, (m[0], ())): -_sgn(N.L.parity(N.pairs[k][0])) * c for (k, m), c in rdt.items()}
        add_into(poly, _integrate_t(corr))
    else:  # pragma: no cover - nilpotency guarantees termination
        raise ValidationError("flow equation did not stabilise")
    if not cell.is_mc():
        raise ValidationError("one-simplex is not Maurer-Cartan")
    if cell.vertex(0) != omega or cell.vertex(1) != gauge_act(x, omega):
        raise ValidationError("one-simplex endpoints do not match the gauge action")
    return cell


def nerve_pi_square_zero(L: DGLA, V, i: int) -> int:
    """``dim pi_i`` of the MC nerve over square-zero coefficients ``k (+) V``:
    ``H^{1-i}(Tot(L (x) V))``."""
    if i < 0:
        raise ValueError("homotopy degree must be non-negative")
    N = coefficient_extension(L, _square_zero_algebra(V), validate=False)
    return N.complex(validate=False).cohomology(1 - i)[0]


# bigraded Artinian algebras ------------------------------------------------------

def _norm(labels, table, arity):
    from .structure import normalize_table
    return normalize_table(labels, table, arity)


class BigradedArtin:
    """Maximal ideal of a bigraded Artinian algebra with ``delta`` and ``partial``."""

    def __init__(self, labels: Sequence[str], bidegrees: Sequence[tuple[int, int]],
                 mult: Mapping | None = None, delta: Mapping | None = None,
                 partial: Mapping | None = None, validate: bool = True,
                 name: str | None = None):
        self.labels = tuple(labels)
        self.bideg = [(int(i), int(j)) for i, j in bidegrees]
        if len(self.bideg) != len(self.labels):
            raise DimensionError("one bidegree per basis element")
        self.product = _norm(self.labels, mult, 2)
        self.delta = _norm(self.labels, delta, 1)
        self.partial = _norm(self.labels, partial, 1)
        self.name = name
        if validate:
            self.validate()

    @property
    def dim(self) -> int:
        return len(self.labels)

    def index(self, label) -> int:
        return self.labels.index(label)

    def _apply(self, table, vec):
        out: dict = {}
        for k, c in vec.items():
            add_into(out, table.get(k, {}), c)
        return out

    def mul(self, x, y) -> dict:
        out: dict = {}
        for a, ca in x.items():
            for b, cb in y.items():
                add_into(out, self.product.get((a, b), {}), ca * cb)
        return out

    def d_delta(self, x) -> dict:
        return self._apply(self.delta, x)

    def d_partial(self, x) -> dict:
        return self._apply(self.partial, x)

    def slice(self, i: int) -> list[int]:
        return [k for k, (ci, _) in enumerate(self.bideg) if ci == i]

    def validate(self):
        n, bd = self.dim, self.bideg
        if any(i < 0 or j < 0 for i, j in bd):
            raise ValidationError("bidegrees must be non-negative")
        e = [{k: Fraction(1)} for k in range(n)]
        for (a, b), v in self.product.items():
            want = (bd[a][0] + bd[b][0], bd[a][1] + bd[b][1])
            if any(bd[k] != want for k in v):
                raise ValidationError(f"product of {self.labels[a]}, {self.labels[b]} has the wrong bidegree")
        for name, table, shift in (("delta", self.delta, (1, 0)), ("partial", self.partial, (0, -1))):
            for a, v in table.items():
                want = (bd[a][0] + shift[0], bd[a][1] + shift[1])
                if any(bd[k] != want for k in v):
                    raise ValidationError(f"{name} of {self.labels[a]} has the wrong bidegree")
        for a in range(n):
            if self.d_delta(self.d_delta(e[a])) or self.d_partial(self.d_partial(e[a])):
                raise ValidationError(f"a differential does not square to zero on {self.labels[a]}")
            dp = self.d_delta(self.d_partial(e[a]))
            if add_into(dp, self.d_partial(self.d_delta(e[a])), -1):
                raise ValidationError(f"delta and partial do not commute on {self.labels[a]}")
        for a in range(n):
            ia, ja = bd[a]
            for b in range(n):
                ib, jb = bd[b]
                ab = self.mul(e[a], e[b])
                if add_into(dict(ab), self.mul(e[b], e[a]), -_sgn(ia * ib + ja * jb)):
                    raise ValidationError(f"{self.labels[a]}, {self.labels[b]} do not commute")
                for dname, dfn, deg in (("delta", self.d_delta, ia), ("partial", self.d_partial, ja)):
                    lhs = dfn(ab)
                    add_into(lhs, self.mul(dfn(e[a]), e[b]), -1)
                    add_into(lhs, self.mul(e[a], dfn(e[b])), -_sgn(deg))
                    if lhs:
                        raise ValidationError(f"{dname} is not a derivation on {self.labels[a]}, {self.labels[b]}")
                for c in range(n):
                    lhs = self.mul(ab, e[c])
                    if add_into(lhs, self.mul(e[a], self.mul(e[b], e[c])), -1):
                        raise ValidationError("multiplication is not associative")
        # nilpotency
        power = [dict(v) for v in e]
        for _ in range(n + 1):
            nxt = []
            for x in power:
                for b in range(n):
                    y = self.mul(x, e[b])
                    if y:
                        nxt.append(y)
            if not nxt:
                return True
            power = nxt
        raise ValidationError("the ideal is not nilpotent")


class BigradedMap:
    def __init__(self, source: BigradedArtin, target: BigradedArtin, images, check: bool = True):
        self.source, self.target = source, target
        if isinstance(images, Mapping):
            imgs = [{} for _ in range(source.dim)]
            for k, v in images.items():
                kk = source.index(k) if isinstance(k, str) else k
                imgs[kk] = {(target.index(t) if isinstance(t, str) else t): Fraction(c)
                            for t, c in v.items() if c}
            images = imgs
        self.images = [{int(t): Fraction(c) for t, c in im.items() if c} for im in images]
        if check:
            self.validate()

    def apply(self, vec) -> dict:
        out: dict = {}
        for k, c in vec.items():
            add_into(out, self.images[k], c)
        return out

    def validate(self):
        S, T = self.source, self.target
        for a, im in enumerate(self.images):
            if any(T.bideg[t] != S.bideg[a] for t in im):
                raise ValidationError(f"image of {S.labels[a]} has the wrong bidegree")
            for dS, dT in ((S.d_delta, T.d_delta), (S.d_partial, T.d_partial)):
                lhs = self.apply(dS({a: Fraction(1)}))
                if add_into(lhs, dT(im), -1):
                    raise ValidationError(f"map does not commute with a differential on {S.labels[a]}")
            for b in range(S.dim):
                lhs = self.apply(S.mul({a: 1}, {b: 1}))
                if add_into(lhs, T.mul(im, self.images[b]), -1):
                    raise ValidationError("map is not multiplicative")
        return True


def tot_bigraded_artin(B: BigradedArtin, validate: bool = True) -> ArtinCdga:
    """Total algebra: chain degree ``j - i``, product ``a * b = (-1)^{j_a i_b} ab``,
    differential ``delta + (-1)^i partial``."""
    bd = B.bideg
    mult = {}
    for (a, b), v in B.product.items():
        s = _sgn(bd[a][1] * bd[b][0])
        mult[(a, b)] = {k: s * c for k, c in v.items()}
    diff: dict = {}
    for a in range(B.dim):
        out = dict(B.delta.get(a, {}))
        add_into(out, B.partial.get(a, {}), _sgn(bd[a][0]))
        if out:
            diff[a] = out
    return ArtinCdga(B.labels, [j - i for i, j in bd], mult, diff, validate=validate,
                     name=f"Tot({B.name})" if B.name else None)


def tot_bigraded_map(f: BigradedMap, source: ArtinCdga | None = None,
                     target: ArtinCdga | None = None) -> CdgaMap:
    source = source or tot_bigraded_artin(f.source)
    target = target or tot_bigraded_artin(f.target)
    return CdgaMap(source, target, f.images)


# denormalisation -------------------------------------------------------------------

def surjections(n: int, k: int) -> list[tuple]:
    """Monotone surjections ``[n] -> [k]`` as value tuples, lexicographic."""
    out = []
    for jumps in combinations(range(1, n + 1), k):
        vals, cur = [0], 0
        for i in range(1, n + 1):
            if i in jumps:
                cur += 1
            vals.append(cur)
        out.append(tuple(vals))
    return out


def _jumps(eps: tuple) -> tuple:
    return tuple(i for i in range(1, len(eps)) if eps[i] != eps[i - 1])


def _epi_mono(f: tuple):
    image = sorted(set(f))
    return tuple(image.index(v) for v in f), tuple(image)


def coface_map(n: int, i: int) -> tuple:
    """``[n-1] -> [n]`` skipping ``i``."""
    return tuple(j if j < i else j + 1 for j in range(n))


def codegeneracy_map(n: int, i: int) -> tuple:
    """``[n+1] -> [n]`` hitting ``i`` twice."""
    return tuple(j if j <= i else j - 1 for j in range(n + 2))


class CosimplicialArtin:
    """Denormalisation of a bigraded Artinian algebra, built level by level.

    Level ``n`` has basis ``(eps, b)`` with ``eps: [n] -> [k]`` a monotone
    surjection and ``b`` a basis element of cochain degree ``k``; the chain
    degree is that of ``b``.  Writing ``S`` for the set of jumps of
    ``eps`` the product is

        (S, a) (T, b) = sign(S, T) (S u T, ab)   if S, T are disjoint, else 0,

    with ``sign(S, T)`` the signature of the shuffle merging ``S`` before
    ``T``.  A monotone ``theta: [n] -> [m]`` acts by

        (eps, b) -> sum over sigma: [m] -> [k'] with sigma theta = eta eps'
                    and eps' = eps of   (sigma, b)        if eta = id,
                                        (sigma, delta b)  if eta skips 0,

    which is the transpose of the usual simplicial denormalisation.
    """

    def __init__(self, B: BigradedArtin, validate: bool = True):
        self.source = B
        self._validate = validate
        self._levels: dict[int, ArtinCdga] = {}
        self._bases: dict[int, list[tuple]] = {}
        self._maps: dict[tuple, CdgaMap] = {}
        self.max_cochain = max((i for i, _ in B.bideg), default=0)

    def basis(self, n: int) -> list[tuple]:
        if n not in self._bases:
            B = self.source
            out = []
            for k in range(0, min(n, self.max_cochain) + 1):
                for eps in surjections(n, k):
                    for b in B.slice(k):
                        out.append((eps, b))
            self._bases[n] = out
        return self._bases[n]

    def level(self, n: int) -> ArtinCdga:
        if n < 0:
            raise IndexError("levels are non-negative")
        if n not in self._levels:
            B = self.source
            basis = self.basis(n)
            pos = {key: r for r, key in enumerate(basis)}
            by_jumps = {}
            for eps, b in basis:
                by_jumps.setdefault(_jumps(eps), {})[b] = pos[(eps, b)]
            mult, diff = {}, {}
            for r1, (e1, a) in enumerate(basis):
                S = _jumps(e1)
                da = B.partial.get(a)
                if da:
                    diff[r1] = {by_jumps[S][c]: v for c, v in da.items()}
                for r2, (e2, b) in enumerate(basis):
                    T = _jumps(e2)
                    if set(S) & set(T):
                        continue
                    ab = B.product.get((a, b))
                    if not ab:
                        continue
                    inv = sum(1 for x in S for y in T if x > y)
                    U = tuple(sorted(S + T))
                    mult[(r1, r2)] = {by_jumps[U][c]: _sgn(inv) * v for c, v in ab.items()}
            labels = [f"{B.labels[b]}|{''.join(map(str, _jumps(eps))) or '-'}" for eps, b in basis]
            chain = [B.bideg[b][1] for _, b in basis]
            self._levels[n] = ArtinCdga(labels, chain, mult, diff, validate=self._validate,
                                        name=f"D{n}({B.name})" if B.name else None)
        return self._levels[n]

    def shuffle(self, n: int, x, y) -> dict:
        """Shuffle product of two level-``n`` vectors (keys may be basis pairs)."""
        A = self.level(n)
        pos = {k: r for r, k in enumerate(self.basis(n))}

        def idx(v):
            return {(pos[k] if isinstance(k, tuple) else k): Fraction(c) for k, c in v.items()}
        return A.mul(idx(x), idx(y))

    def structure_map(self, theta: tuple, m: int) -> CdgaMap:
        """Image of the monotone map ``theta: [n] -> [m]`` (``n = len(theta) - 1``)."""
        key = (theta, m)
        if key not in self._maps:
            B = self.source
            n = len(theta) - 1
            src, tgt = self.basis(n), self.basis(m)
            tpos = {k: r for r, k in enumerate(tgt)}
            sigmas = [(sigma, k) for k in range(0, min(m, self.max_cochain) + 1)
                      for sigma in surjections(m, k)]
            images = []
            for eps, b in src:
                out: dict = {}
                l = max(eps)
                for sigma, k in sigmas:
                    comp = tuple(sigma[t] for t in theta)
                    e2, eta = _epi_mono(comp)
                    if e2 != eps:
                        continue
                    if k == l and eta == tuple(range(l + 1)):
                        add_into(out, {tpos[(sigma, b)]: Fraction(1)})
                    elif k == l + 1 and eta == tuple(range(1, l + 2)):
                        for c, v in B.delta.get(b, {}).items():
                            add_into(out, {tpos[(sigma, c)]: v})
                images.append(out)
            self._maps[key] = CdgaMap(self.level(n), self.level(m), images, check=self._validate)
        return self._maps[key]

    def coface(self, n: int, i: int) -> CdgaMap:
        """``d^i``: level ``n-1`` to level ``n``."""
        if n < 1 or not 0 <= i <= n:
            raise IndexError(f"coface d^{i} into level {n} does not exist")
        return self.structure_map(coface_map(n, i), n)

    def codegeneracy(self, n: int, i: int) -> CdgaMap:
        """``s^i``: level ``n+1`` to level ``n``."""
        if not 0 <= i <= n:
            raise IndexError(f"codegeneracy s^{i} out of level {n + 1} does not exist")
        return self.structure_map(codegeneracy_map(n, i), n)

    def check_identities(self, max_level: int = 3) -> bool:
        """Cosimplicial identities for all maps among levels ``<= max_level``."""
        def same(f, g):
            return f.matrix == g.matrix

        for n in range(0, max_level + 1):
            self.level(n)
        for n in range(2, max_level + 1):
            # d^j d^i = d^i d^{j-1} for i < j, as maps level n-2 -> n
            for j in range(n + 1):
                for i in range(j):
                    if not same(self.coface(n, j).compose(self.coface(n - 1, i)),
                                self.coface(n, i).compose(self.coface(n - 1, j - 1))):
                        raise ValidationError(f"coface identity fails at level {n}, ({i}, {j})")
        for n in range(0, max_level):
            # s^j s^i = s^i s^{j+1} for i <= j, level n+2 -> n
            if n + 2 <= max_level:
                for j in range(n + 1):
                    for i in range(j + 1):
                        if not same(self.codegeneracy(n, j).compose(self.codegeneracy(n + 1, i)),
                                    self.codegeneracy(n, i).compose(self.codegeneracy(n + 1, j + 1))):
                            raise ValidationError(f"codegeneracy identity fails at level {n}")
            # mixed: s^j d^i, level n -> n (through n+1)
            for j in range(n + 1):
                for i in range(n + 2):
                    lhs = self.codegeneracy(n, j).compose(self.coface(n + 1, i))
                    if i < j:
                        rhs = self.coface(n, i).compose(self.codegeneracy(n - 1, j - 1))
                    elif i in (j, j + 1):
                        rhs = None
                    else:
                        rhs = self.coface(n, i - 1).compose(self.codegeneracy(n - 1, j))
                    if rhs is None:
                        ok = lhs.matrix == _identity(self.level(n).dim)
                    else:
                        ok = same(lhs, rhs)
                    if not ok:
                        raise ValidationError(f"mixed identity fails at level {n}, (s^{j}, d^{i})")
        return True


def _identity(n):
    from .qlinalg import RatMatrix
    m = RatMatrix(n, n)
    for i in range(n):
        m._set(i, i, Fraction(1))
    return m


def denormalize(B: BigradedArtin, validate: bool = True) -> CosimplicialArtin:
    return CosimplicialArtin(B, validate=validate)


def denormalize_map(f: BigradedMap, DB: CosimplicialArtin, DC: CosimplicialArtin,
                    n: int) -> CdgaMap:
    """Level ``n`` of the induced map of denormalisations."""
    src, tgt = DB.basis(n), DC.basis(n)
    tpos = {k: r for r, k in enumerate(tgt)}
    images = [{tpos[(eps, c)]: v for c, v in f.images[b].items()} for eps, b in src]
    return CdgaMap(DB.level(n), DC.level(n), images)
