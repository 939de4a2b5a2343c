"""Local Artinian cdgas ``A = k (+) m(A)`` and the small-extension calculus.

Only the maximal ideal is stored; the unit is implicit.  Degrees given to
constructors are *chain* degrees (the differential lowers them); internally
they are kept as cochain degrees ``-i`` so that the same linear algebra
serves DGLAs and cdgas.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .complexes import CochainComplex
from .errors import DimensionError, ValidationError
from .qlinalg import Echelon, RatMatrix, kernel_basis, rank, solve
from .sparse import add_into
from .structure import GradedStructure, normalize_table

__all__ = [
    "ArtinCdga",
    "CdgaMap",
    "ExtensionClassification",
    "ConeExtension",
    "base_field",
    "dual_numbers",
    "square_zero",
    "truncated_polynomial",
    "fiber_product",
    "quotient",
    "graded_kernel",
    "classify_surjection",
    "cone_extension",
    "unit_map",
    "augmentation",
    "subideal",
]


class ArtinCdga(GradedStructure):
    """Finite-dimensional local cdga, chain graded.

    ``mult[(a, b)]`` and ``diff[a]`` accept labels or indices.  The
    nilpotency index is computed here, never taken from input.
    """

    def __init__(self, labels: Sequence[str], chain_degrees: Sequence[int],
                 mult: Mapping | None = None, diff: Mapping | None = None,
                 validate: bool = True, name: str | None = None):
        labels = tuple(labels)
        super().__init__(labels, [-int(i) for i in chain_degrees],
                         normalize_table(labels, mult, 2), normalize_table(labels, diff, 1))
        self.name = name
        self.powers = self._compute_powers()
        self.nilpotency_index = len(self.powers) + 1
        if validate:
            self.validate()

    def __repr__(self):
        nm = f"{self.name}: " if self.name else ""
        return f"ArtinCdga({nm}dim m = {self.dim}, nilpotency {self.nilpotency_index})"

    def chain_degree(self, i: int) -> int:
        return -self.cdeg[i]

    @property
    def chain_degrees(self) -> tuple[int, ...]:
        return tuple(-n for n in self.cdeg)

    @property
    def nonneg(self) -> bool:
        return all(n <= 0 for n in self.cdeg)

    @property
    def maximal_ideal(self) -> CochainComplex:
        return self.complex()

    def _compute_powers(self) -> list[list[dict]]:
        """Bases of m, m^2, ... down to the last nonzero power."""
        if not self.dim:
            return []
        current = [{i: Fraction(1)} for i in range(self.dim)]
        powers = [current]
        while True:
            ech = Echelon(self.dim, track=False)
            nxt = []
            for v in current:
                for j in range(self.dim):
                    w = self.mul(v, {j: Fraction(1)})
                    if w and ech.add(w):
                        nxt.append(w)
            if not nxt:
                return powers
            if len(nxt) >= len(current):
                raise ValidationError("maximal ideal is not nilpotent")
            powers.append(nxt)
            current = nxt

    def weight(self, vec) -> int:
        """Largest k with ``vec`` in m^k (``nilpotency_index`` for zero)."""
        if not vec:
            return self.nilpotency_index
        w = 0
        for k, basis in enumerate(self.powers, start=1):
            ech = Echelon(self.dim, track=False)
            for b in basis:
                ech.add(b)
            if ech.contains(vec):
                w = k
            else:
                break
        return w

    def validate(self):
        """Graded commutativity, associativity, Leibniz, d^2 = 0."""
        self.check_d_squared()
        n = self.dim
        e = [{i: Fraction(1)} for i in range(n)]
        for i in range(n):
            for j in range(n):
                ab = self.mul(e[i], e[j])
                sign = -1 if self.parity(i) and self.parity(j) else 1
                ba = self.mul(e[j], e[i])
                if add_into(dict(ab), ba, -sign):
                    raise ValidationError(
                        f"{self.labels[i]}*{self.labels[j]} is not graded commutative")
                lhs = self.d(ab)
                rhs = self.mul(self.d(e[i]), e[j])
                add_into(rhs, self.mul(e[i], self.d(e[j])), -1 if self.parity(i) else 1)
                if add_into(lhs, rhs, -1):
                    raise ValidationError(
                        f"Leibniz rule fails on {self.labels[i]}, {self.labels[j]}")
                if not ab:
                    continue
                for k in range(n):
                    left = self.mul(ab, e[k])
                    right = self.mul(e[i], self.mul(e[j], e[k]))
                    if add_into(left, right, -1):
                        raise ValidationError(
                            f"associativity fails on {self.labels[i]}, {self.labels[j]}, "
                            f"{self.labels[k]}")
        return True


class CdgaMap:
    """Unital cdga map, given by the images of the ideal basis elements."""

    def __init__(self, source: ArtinCdga, target: ArtinCdga, images, check: bool = True):
        self.source = source
        self.target = target
        if isinstance(images, RatMatrix):
            if images.shape != (target.dim, source.dim):
                raise DimensionError("map matrix has the wrong shape")
            images = [images.apply_sparse({j: Fraction(1)}) for j in range(source.dim)]
        elif isinstance(images, Mapping):
            imgs = [dict() for _ in range(source.dim)]
            for k, v in images.items():
                i = source.index(k) if isinstance(k, str) else int(k)
                imgs[i] = target.vector(v)
            images = imgs
        images = [dict((int(k), Fraction(v)) for k, v in im.items() if v) for im in images]
        if len(images) != source.dim:
            raise DimensionError("one image per source basis element is required")
        self.images = images
        if check:
            self.validate()

    @property
    def matrix(self) -> RatMatrix:
        m = RatMatrix(self.target.dim, self.source.dim)
        for j, im in enumerate(self.images):
            for i, v in im.items():
                m._set(i, j, v)
        return m

    def apply(self, vec) -> dict[int, Fraction]:
        out: dict[int, Fraction] = {}
        for j, c in vec.items():
            add_into(out, self.images[j], c)
        return out

    def compose(self, first: CdgaMap) -> CdgaMap:
        """``self o first``."""
        if first.target is not self.source and not first.target.same_as(self.source):
            raise DimensionError("maps are not composable")
        return CdgaMap(first.source, self.target, [self.apply(im) for im in first.images],
                       check=False)

    def validate(self):
        s, t = self.source, self.target
        for j, im in enumerate(self.images):
            for i in im:
                if t.cdeg[i] != s.cdeg[j]:
                    raise ValidationError(f"map does not preserve the degree of {s.labels[j]}")
        for j in range(s.dim):
            e = {j: Fraction(1)}
            if add_into(self.apply(s.d(e)), t.d(self.apply(e)), -1):
                raise ValidationError(f"map does not commute with d on {s.labels[j]}")
            for k in range(s.dim):
                lhs = self.apply(s.mul(e, {k: Fraction(1)}))
                rhs = t.mul(self.images[j], self.images[k])
                if add_into(lhs, rhs, -1):
                    raise ValidationError(
                        f"map is not multiplicative on {s.labels[j]}, {s.labels[k]}")
        return True

    def is_surjective(self) -> bool:
        return rank(self.matrix) == self.target.dim

    def is_injective(self) -> bool:
        return rank(self.matrix) == self.source.dim

    def section(self) -> RatMatrix:
        """A degree-preserving linear right inverse (surjective maps only)."""
        s, t = self.source, self.target
        out = RatMatrix(s.dim, t.dim)
        for n, tgt_idx in t.by_degree().items():
            src_idx = s.indices_in_degree(n)
            block = RatMatrix(len(tgt_idx), len(src_idx))
            pos = {i: r for r, i in enumerate(tgt_idx)}
            for c, j in enumerate(src_idx):
                for i, v in self.images[j].items():
                    block._set(pos[i], c, v)
            for r, i in enumerate(tgt_idx):
                x = solve(block, [Fraction(int(r == q)) for q in range(len(tgt_idx))])
                if x is None:
                    raise ValidationError("map is not surjective; no section")
                for c, v in enumerate(x):
                    if v:
                        out._set(src_idx[c], i, v)
        return out

    def __eq__(self, other):
        return (isinstance(other, CdgaMap) and self.source.same_as(other.source)
                and self.target.same_as(other.target) and self.images == other.images)

    def __repr__(self):
        return f"CdgaMap({self.source!r} -> {self.target!r})"


# constructors --------------------------------------------------------------

def base_field() -> ArtinCdga:
    return ArtinCdga([], [], name="k")


def dual_numbers(n: int = 0, label: str = "eps") -> ArtinCdga:
    """``k[eps]`` with ``eps`` in chain degree ``n`` and ``eps^2 = 0``."""
    if n < 0:
        raise ValueError("dual numbers need a non-negative degree")
    return ArtinCdga([label], [n], name=f"k[eps_{n}]")


def truncated_polynomial(r: int, var: str = "t") -> ArtinCdga:
    """``k[t]/t^r`` with ``t`` in degree 0; basis ``t, t^2, ..., t^(r-1)``."""
    if r < 2:
        raise ValueError("truncated_polynomial needs r >= 2")
    labels = [var if a == 1 else f"{var}^{a}" for a in range(1, r)]
    mult = {}
    for a in range(1, r):
        for b in range(1, r):
            if a + b < r:
                mult[(a - 1, b - 1)] = {a + b - 1: 1}
    return ArtinCdga(labels, [0] * (r - 1), mult, name=f"k[{var}]/{var}^{r}")


def square_zero(V: CochainComplex, name: str | None = None) -> ArtinCdga:
    """``k (+) V`` with all ideal products zero; ``V`` is a chain complex
    stored cochain graded, so cochain degree ``n`` becomes chain degree ``-n``."""
    labels, degs, pos = [], [], {}
    for n in V.degrees:
        for k, x in enumerate(V.space.labels(n)):
            pos[(n, k)] = len(labels)
            labels.append(x)
            degs.append(-n)
    if len(set(labels)) != len(labels):
        labels = [f"{x}@{-n}" for (n, _), x in zip(pos, labels)]
    diff = {}
    for n in V.degrees:
        for r, c, v in V.d(n).nonzero():
            diff.setdefault(pos[(n, c)], {})[pos[(n + 1, r)]] = v
    return ArtinCdga(labels, degs, {}, diff, name=name)


def subideal(A: ArtinCdga, vectors: Sequence[dict], labels: Sequence[str]) -> ArtinCdga:
    """A square-zero cdga on a d-stable subspace of ``m(A)`` spanned by
    homogeneous ``vectors``; the product is forgotten (set to zero)."""
    ech = Echelon(A.dim)
    for v in vectors:
        if not ech.add(v):
            raise ValidationError("subideal vectors are dependent")
    degs = [A.vector_degree(v) for v in vectors]
    diff = {}
    for k, v in enumerate(vectors):
        rem, combo = ech.reduce(A.d(v))
        if rem:
            raise ValidationError("subspace is not closed under d")
        if combo:
            diff[k] = combo
    return ArtinCdga(list(labels), [-n for n in degs], {}, diff)


def unit_map(A: ArtinCdga) -> CdgaMap:
    """The unit ``k -> A`` (zero on the empty ideal)."""
    return CdgaMap(base_field(), A, [])


def augmentation(A: ArtinCdga) -> CdgaMap:
    return CdgaMap(A, base_field(), [{} for _ in range(A.dim)])


def graded_kernel(f: CdgaMap) -> list[dict]:
    """Homogeneous kernel basis, degree by degree (ascending cochain
    degree), each degree's vectors read off reduced row echelon form."""
    s, t = f.source, f.target
    out = []
    for n, src_idx in s.by_degree().items():
        tgt_idx = t.indices_in_degree(n)
        pos = {i: r for r, i in enumerate(tgt_idx)}
        block = RatMatrix(len(tgt_idx), len(src_idx))
        for c, j in enumerate(src_idx):
            for i, v in f.images[j].items():
                block._set(pos[i], c, v)
        for vec in kernel_basis(block):
            out.append({src_idx[c]: v for c, v in enumerate(vec) if v})
    return out


def fiber_product(f: CdgaMap, g: CdgaMap):
    """``A x_B C`` for ``f: A -> B``, ``g: C -> B``.

    Returns ``(P, p_A, p_C)``.  The ideal of ``P`` is the kernel of
    ``(a, c) -> f(a) - g(c)`` with its echelon basis; basis labels are taken
    from the free coordinate of each basis vector (primed on collision).
    """
    A, C, B = f.source, g.source, f.target
    if not B.same_as(g.target):
        raise DimensionError("fiber product needs a common target")
    nA = A.dim
    combined = list(f.images) + [{i: -v for i, v in im.items()} for im in g.images]
    all_labels = list(A.labels) + list(C.labels)
    degs = list(A.cdeg) + list(C.cdeg)
    basis: list[dict] = []
    for n in sorted(set(degs)):
        cols = [j for j, d in enumerate(degs) if d == n]
        tgt_idx = B.indices_in_degree(n)
        pos = {i: r for r, i in enumerate(tgt_idx)}
        block = RatMatrix(len(tgt_idx), len(cols))
        for c, j in enumerate(cols):
            for i, v in combined[j].items():
                block._set(pos[i], c, v)
        for vec in kernel_basis(block):
            sp = {cols[c]: v for c, v in enumerate(vec) if v}
            basis.append(sp)
    # coordinates of a kernel vector are its values at the free columns
    free_cols = _free_columns(basis)
    taken: set = set()
    labels = []
    for fc in free_cols:
        lab = all_labels[fc]
        while lab in taken:
            lab += "'"
        taken.add(lab)
        labels.append(lab)

    def coords(vec):
        out = {k: vec[fc] for k, fc in enumerate(free_cols) if vec.get(fc)}
        return out

    def split(vec):
        a = {j: v for j, v in vec.items() if j < nA}
        c = {j - nA: v for j, v in vec.items() if j >= nA}
        return a, c

    def join(a, c):
        out = dict(a)
        out.update({j + nA: v for j, v in c.items()})
        return out

    mult, diff = {}, {}
    for p, u in enumerate(basis):
        ua, uc = split(u)
        dv = join(A.d(ua), C.d(uc))
        if dv:
            diff[p] = coords(dv)
        for q, w in enumerate(basis):
            wa, wc = split(w)
            prod = join(A.mul(ua, wa), C.mul(uc, wc))
            if prod:
                mult[(p, q)] = coords(prod)
    P = ArtinCdga(labels, [-degs[fc] for fc in free_cols], mult, diff,
                  name=f"{A.name or 'A'} x {C.name or 'C'}")
    pa = CdgaMap(P, A, [split(u)[0] for u in basis])
    pc = CdgaMap(P, C, [split(u)[1] for u in basis])
    P.fiber_coords = lambda a, c: coords(join(a, c))  # type: ignore[attr-defined]
    return P, pa, pc


def _free_columns(basis: Sequence[dict]) -> list[int]:
    """Free column of each canonical kernel vector: the unique column where it
    is 1 and every other basis vector vanishes."""
    out = []
    for k, v in enumerate(basis):
        for col in sorted(v):
            if v[col] == 1 and all(col not in w for m, w in enumerate(basis) if m != k):
                out.append(col)
                break
        else:  # pragma: no cover - kernel_basis always yields such a column
            raise ValidationError("basis is not in canonical echelon form")
    return out


def quotient(A: ArtinCdga, ideal: Sequence[dict]):
    """``A/J`` for a dg ideal spanned by ``ideal``; returns ``(Q, q)``.

    The basis of ``Q`` is the set of non-pivot coordinates of the reduced
    echelon form of ``J``, with labels inherited from ``A``.
    """
    ech = Echelon(A.dim, track=False)
    for v in ideal:
        ech.add(v)
    pivots = set(ech.pivots)
    keep = [i for i in range(A.dim) if i not in pivots]
    pos = {i: k for k, i in enumerate(keep)}

    def red(vec):
        rem, _ = ech.reduce(vec)
        return {pos[i]: v for i, v in rem.items()}

    for v in ideal:
        for j in range(A.dim):
            if red(A.mul(v, {j: Fraction(1)})):
                raise ValidationError("subspace is not an ideal")
        if red(A.d(v)):
            raise ValidationError("ideal is not closed under d")
    mult, diff = {}, {}
    for a, i in enumerate(keep):
        dv = red(A.d({i: Fraction(1)}))
        if dv:
            diff[a] = dv
        for b, j in enumerate(keep):
            pv = red(A.mul({i: Fraction(1)}, {j: Fraction(1)}))
            if pv:
                mult[(a, b)] = pv
    Q = ArtinCdga([A.labels[i] for i in keep], [A.chain_degree(i) for i in keep], mult, diff)
    q = CdgaMap(A, Q, [red({i: Fraction(1)}) for i in range(A.dim)])
    Q.representatives = keep  # type: ignore[attr-defined]
    return Q, q


def _ideal_product(A: ArtinCdga, left: Sequence[dict], right: Sequence[dict]) -> list[dict]:
    ech = Echelon(A.dim, track=False)
    out = []
    for u in left:
        for w in right:
            p = A.mul(u, w)
            if p and ech.add(p):
                out.append(p)
    return out


@dataclass
class ExtensionClassification:
    kind: str  # not-surjective | small | acyclic-small | surjective-composite
    kernel: CochainComplex | None
    kernel_vectors: list = field(default_factory=list)
    factorization: list | None = None

    @property
    def is_small(self):
        return self.kind in ("small", "acyclic-small")


def classify_surjection(f: CdgaMap) -> ExtensionClassification:
    if not f.is_surjective():
        return ExtensionClassification("not-surjective", None)
    A = f.source
    ker = graded_kernel(f)
    I = subideal(A, ker, [f"i{k}" for k in range(len(ker))])
    basis_m = [{j: Fraction(1)} for j in range(A.dim)]
    if not _ideal_product(A, ker, basis_m):
        kind = "acyclic-small" if I.complex().is_acyclic() else "small"
        return ExtensionClassification(kind, I.complex(), ker, [f])
    # filtration I > m I > m^2 I > ... > 0; each step is small
    layers = [ker]
    while layers[-1]:
        layers.append(_ideal_product(A, basis_m, layers[-1]))
    # layers[k] spans m^k I, layers[-1] is empty
    quotients = [quotient(A, layer) for layer in layers[1:-1]]  # A/(m^k I), k >= 1
    maps = []
    prev_q = None
    for k in range(len(quotients) - 1, -1, -1):
        Qk, qk = quotients[k]
        if prev_q is None:
            maps.append(qk)
        else:
            src = prev_q[0]
            reps = src.representatives
            maps.append(CdgaMap(src, Qk, [qk.images[i] for i in reps]))
        prev_q = (Qk, qk)
    Q1 = quotients[0][0]
    maps.append(CdgaMap(Q1, f.target, [f.images[i] for i in Q1.representatives]))
    for m in maps:
        if not classify_surjection(m).is_small:
            raise ValidationError("factorization step is not small")  # pragma: no cover
    return ExtensionClassification("surjective-composite", I.complex(), ker, maps)


@dataclass
class ConeExtension:
    """Cone of ``I -> A`` over a small extension ``e: A -> B``.

    ``tilde`` is ``A (+) I[1]``, ``phi: tilde -> B`` is an acyclic small
    extension, ``rho: tilde -> k (+) I[1]`` kills ``m(A)``.  ``kernel``
    lists the basis of ``I`` as vectors in ``m(A)``; ``fiber_iso`` is the
    constructed isomorphism ``A -> tilde x_{k (+) I[1]} k``.
    """

    tilde: ArtinCdga
    phi: CdgaMap
    rho: CdgaMap
    shifted: ArtinCdga
    kernel: list
    inclusion: CdgaMap
    fiber_iso: CdgaMap

    def __iter__(self):
        return iter((self.tilde, self.phi, self.rho))


def cone_extension(e: CdgaMap) -> ConeExtension:
    cls = classify_surjection(e)
    if not cls.is_small:
        raise ValidationError(f"cone extension needs a small extension, got {cls.kind}")
    A = e.source
    ker = cls.kernel_vectors
    taken = set(A.labels)
    slabels = []
    for fc in _free_columns(ker):
        lab = "s" + A.labels[fc]
        while lab in taken:
            lab += "'"
        taken.add(lab)
        slabels.append(lab)
    ech = Echelon(A.dim)
    for v in ker:
        ech.add(v)
    nA, nI = A.dim, len(ker)
    labels = list(A.labels) + slabels
    degs = list(A.chain_degrees) + [-A.vector_degree(v) + 1 for v in ker]
    mult = {k: dict(v) for k, v in A.product.items()}
    diff = {k: dict(v) for k, v in A.diff.items()}
    for k, v in enumerate(ker):
        dv = dict(v)
        _, combo = ech.reduce(A.d(v))
        for m, c in combo.items():
            dv[nA + m] = dv.get(nA + m, 0) - c
        diff[nA + k] = {j: c for j, c in dv.items() if c}
    tilde = ArtinCdga(labels, degs, mult, diff, name=f"cone({A.name or 'A'})")
    # the shifted algebra's differential only keeps the I[1] -> I[1] part
    shifted = ArtinCdga(slabels, degs[nA:], {},
                        {k: {j - nA: c for j, c in diff.get(nA + k, {}).items() if j >= nA}
                         for k in range(nI)}, name="k+I[1]")
    phi = CdgaMap(tilde, e.target, list(e.images) + [{} for _ in range(nI)])
    rho = CdgaMap(tilde, shifted, [{} for _ in range(nA)] + [{k: Fraction(1)} for k in range(nI)])
    inclusion = CdgaMap(A, tilde, [{i: Fraction(1)} for i in range(nA)])
    P, p_tilde, _ = fiber_product(rho, unit_map(shifted))
    iso = CdgaMap(A, P, [P.fiber_coords({i: Fraction(1)}, {}) for i in range(nA)])
    if not (iso.is_injective() and iso.is_surjective()):
        raise ValidationError("A is not the fiber of rho")  # pragma: no cover
    if classify_surjection(phi).kind != "acyclic-small":
        raise ValidationError("phi is not an acyclic small extension")  # pragma: no cover
    return ConeExtension(tilde, phi, rho, shifted, ker, inclusion, iso)
