"""Graded vector spaces, cochain complexes, bicomplexes.

Everything is cochain graded (differentials raise degree).  Chain-graded
data, such as the maximal ideal of an Artinian cdga, is stored under the
rule "chain degree i <-> cochain degree -i".

Sign conventions, fixed once for the whole package:

* shift: ``(C[k])^n = C^{n+k}`` with differential ``(-1)^k d``;
* cone of ``f: X -> Y``: ``Y^n (+) X^{n+1}``, ``d(y, x) = (dy + f x, -dx)``;
* total complex of a bicomplex: ``d = d_h + (-1)^i d_v`` on the ``(i, j)``
  component, where ``i`` is the cochain and ``j`` the chain index.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import DimensionError, ValidationError
from .qlinalg import RatMatrix, complement_indices, image_basis, solve, subquotient

__all__ = [
    "GradedSpace",
    "CochainComplex",
    "ChainMap",
    "Bicomplex",
    "cohomology",
    "shift",
    "cone",
    "tot_bicomplex",
    "contracting_homotopy",
]


class GradedSpace:
    """Finite-dimensional graded vector space with labelled bases."""

    def __init__(self, labels: Mapping[int, Sequence[str]]):
        self._labels: dict[int, tuple[str, ...]] = {}
        for n in sorted(labels):
            ls = tuple(str(x) for x in labels[n])
            if len(set(ls)) != len(ls):
                raise ValidationError(f"duplicate labels in degree {n}")
            if ls:
                self._labels[int(n)] = ls

    @classmethod
    def from_dims(cls, dims: Mapping[int, int], prefix="e"):
        return cls({n: [f"{prefix}{n}_{k}" for k in range(d)] for n, d in dims.items()})

    @property
    def degrees(self) -> list[int]:
        return list(self._labels)

    def dim(self, n: int) -> int:
        return len(self._labels.get(n, ()))

    def labels(self, n: int) -> tuple[str, ...]:
        return self._labels.get(n, ())

    @property
    def total_dim(self) -> int:
        return sum(len(v) for v in self._labels.values())

    def dims(self) -> dict[int, int]:
        return {n: len(v) for n, v in self._labels.items()}

    def shifted(self, k: int) -> GradedSpace:
        return GradedSpace({n - k: ls for n, ls in self._labels.items()})

    def __eq__(self, other):
        return isinstance(other, GradedSpace) and self._labels == other._labels

    def __repr__(self):
        return f"GradedSpace({self.dims()})"


class CochainComplex:
    """A bounded cochain complex; ``d(n)`` is the matrix C^n -> C^{n+1}."""

    def __init__(self, space: GradedSpace, differential: Mapping[int, RatMatrix] | None = None,
                 validate: bool = True):
        self.space = space
        self._d: dict[int, RatMatrix] = {}
        for n, m in (differential or {}).items():
            if m.shape != (space.dim(n + 1), space.dim(n)):
                raise DimensionError(
                    f"d^{n} has shape {m.shape}, expected {(space.dim(n + 1), space.dim(n))}"
                )
            if not m.is_zero():
                self._d[n] = m
        if validate:
            self.validate()

    @classmethod
    def zero(cls):
        return cls(GradedSpace({}))

    @classmethod
    def from_chain(cls, labels: Mapping[int, Sequence[str]],
                   differential: Mapping[int, RatMatrix] | None = None, validate=True):
        """Build from chain-graded data: ``differential[i]`` maps V_i -> V_{i-1}."""
        space = GradedSpace({-i: ls for i, ls in labels.items()})
        return cls(space, {-i: m for i, m in (differential or {}).items()}, validate)

    def d(self, n: int) -> RatMatrix:
        m = self._d.get(n)
        if m is None:
            return RatMatrix(self.space.dim(n + 1), self.space.dim(n))
        return m

    @property
    def degrees(self) -> list[int]:
        return self.space.degrees

    def dim(self, n):
        return self.space.dim(n)

    def validate(self):
        for n in self.degrees:
            if not (self.d(n + 1) @ self.d(n)).is_zero():
                raise ValidationError(f"d^{n + 1} d^{n} != 0")
        return True

    def degree_range(self) -> range:
        ds = self.degrees
        if not ds:
            return range(0)
        return range(ds[0], ds[-1] + 1)

    def cohomology(self, n: int):
        return subquotient(self.d(n - 1), self.d(n))

    def betti(self) -> dict[int, int]:
        return {n: self.cohomology(n)[0] for n in self.degree_range() if self.cohomology(n)[0]}

    def is_acyclic(self) -> bool:
        return all(self.cohomology(n)[0] == 0 for n in self.degree_range())

    def euler_characteristic(self) -> int:
        return sum((-1) ** (n % 2) * self.dim(n) for n in self.degrees)

    def __repr__(self):
        return f"CochainComplex({self.space.dims()})"


@dataclass
class ChainMap:
    """Degree-0 map of cochain complexes, ``maps[n]: X^n -> Y^n``."""

    source: CochainComplex
    target: CochainComplex
    maps: dict[int, RatMatrix] = field(default_factory=dict)
    check: bool = True

    def __post_init__(self):
        for n, m in self.maps.items():
            if m.shape != (self.target.dim(n), self.source.dim(n)):
                raise DimensionError(f"component {n} has the wrong shape")
        if self.check:
            self.validate()

    def at(self, n) -> RatMatrix:
        m = self.maps.get(n)
        if m is None:
            return RatMatrix(self.target.dim(n), self.source.dim(n))
        return m

    def validate(self):
        degs = set(self.source.degrees) | set(self.target.degrees)
        for n in degs:
            lhs = self.at(n + 1) @ self.source.d(n)
            rhs = self.target.d(n) @ self.at(n)
            if lhs != rhs:
                raise ValidationError(f"not a chain map in degree {n}")
        return True


def cohomology(c: CochainComplex, n: int):
    """``(dim H^n, representatives)``."""
    return c.cohomology(n)


def shift(c: CochainComplex, k: int) -> CochainComplex:
    sign = -1 if k % 2 else 1
    return CochainComplex(c.space.shifted(k), {n - k: m.scale(sign) for n, m in c._d.items()})


def cone(f: ChainMap) -> CochainComplex:
    f.validate()
    X, Y = f.source, f.target
    degs = sorted(set(Y.degrees) | {n - 1 for n in X.degrees})
    labels = {n: list(Y.space.labels(n)) + ["s" + x for x in X.space.labels(n + 1)] for n in degs}
    diff = {}
    for n in degs:
        top = [Y.d(n), f.at(n + 1)]
        bottom = [RatMatrix(X.dim(n + 2), Y.dim(n)), X.d(n + 1).scale(-1)]
        diff[n] = RatMatrix.block([top, bottom])
    return CochainComplex(GradedSpace(labels), diff)


def contracting_homotopy(c: CochainComplex) -> dict[int, RatMatrix]:
    """Maps ``h[n]: C^n -> C^{n-1}`` with ``d h + h d = id``.

    Needs an acyclic complex.  In each degree a complement ``W^n`` of the
    boundaries is fixed (unit vectors, ascending); ``h`` inverts ``d``
    from ``W^{n-1}`` onto the boundaries of ``C^n`` and vanishes on ``W^n``.
    """
    if not c.is_acyclic():
        raise ValidationError("complex has cohomology; no contracting homotopy")
    comps: dict[int, list[int]] = {}
    rng = list(c.degree_range())
    for n in rng:
        comps[n] = complement_indices(image_basis(c.d(n - 1)), c.dim(n))
    h = {}
    for n in rng:
        dim_n, dim_prev = c.dim(n), c.dim(n - 1)
        if not dim_n or not dim_prev:
            continue
        boundaries = image_basis(c.d(n - 1))
        W_prev = comps.get(n - 1, [])
        # d restricted to W^{n-1} is an isomorphism onto B^n
        dW = RatMatrix.from_columns([c.d(n - 1).column(j) for j in W_prev], rows=dim_n)
        change = RatMatrix.from_columns(
            boundaries + [[Fraction(int(i == j)) for i in range(dim_n)] for j in comps[n]],
            rows=dim_n,
        )
        hm = RatMatrix(dim_prev, dim_n)
        nb = len(boundaries)
        for j in range(dim_n):
            e = [Fraction(int(i == j)) for i in range(dim_n)]
            coords = solve(change, e)
            b = [Fraction(0)] * dim_n
            for k in range(nb):
                if coords[k]:
                    for i, v in enumerate(boundaries[k]):
                        b[i] += coords[k] * v
            if not any(b):
                continue
            w = solve(dW, b)
            for k, v in enumerate(w):
                if v:
                    hm._set(W_prev[k], j, v)
        h[n] = hm
    return h


class Bicomplex:
    """Cochain-chain bicomplex with components ``B^i_j`` (``i, j >= 0``).

    ``horizontal[(i, j)]: B^i_j -> B^{i+1}_j`` and
    ``vertical[(i, j)]: B^i_j -> B^i_{j-1}``; both square to zero and commute.
    Labels must be unique across the whole bicomplex.
    """

    def __init__(self, labels: Mapping[tuple[int, int], Sequence[str]],
                 horizontal: Mapping[tuple[int, int], RatMatrix] | None = None,
                 vertical: Mapping[tuple[int, int], RatMatrix] | None = None):
        self.labels = {k: tuple(v) for k, v in sorted(labels.items()) if len(v)}
        for (i, j) in self.labels:
            if i < 0 or j < 0:
                raise ValidationError("bicomplex indices must be non-negative")
        flat = [x for v in self.labels.values() for x in v]
        if len(flat) != len(set(flat)):
            raise ValidationError("bicomplex labels must be unique")
        self.horizontal = dict(horizontal or {})
        self.vertical = dict(vertical or {})
        for (i, j), m in self.horizontal.items():
            if m.shape != (self.dim(i + 1, j), self.dim(i, j)):
                raise DimensionError(f"horizontal map at {(i, j)} has the wrong shape")
        for (i, j), m in self.vertical.items():
            if m.shape != (self.dim(i, j - 1), self.dim(i, j)):
                raise DimensionError(f"vertical map at {(i, j)} has the wrong shape")
        self.validate()

    def dim(self, i, j):
        return len(self.labels.get((i, j), ()))

    def h(self, i, j):
        return self.horizontal.get((i, j)) or RatMatrix(self.dim(i + 1, j), self.dim(i, j))

    def v(self, i, j):
        return self.vertical.get((i, j)) or RatMatrix(self.dim(i, j - 1), self.dim(i, j))

    def validate(self):
        for (i, j) in self.labels:
            if not (self.h(i + 1, j) @ self.h(i, j)).is_zero():
                raise ValidationError(f"horizontal d^2 != 0 at {(i, j)}")
            if not (self.v(i, j - 1) @ self.v(i, j)).is_zero():
                raise ValidationError(f"vertical d^2 != 0 at {(i, j)}")
            if self.v(i + 1, j) @ self.h(i, j) != self.h(i, j - 1) @ self.v(i, j):
                raise ValidationError(f"differentials do not commute at {(i, j)}")
        return True


def tot_bicomplex(b: Bicomplex) -> CochainComplex:
    """Total complex: chain degree n collects the ``(i, i + n)`` components.

    The result is stored cochain graded, so chain degree ``n`` sits in
    cochain degree ``-n``.
    """
    blocks: dict[int, list[tuple[int, int]]] = {}
    for (i, j) in b.labels:
        blocks.setdefault(j - i, []).append((i, j))
    offsets: dict[tuple[int, int], int] = {}
    labels: dict[int, list[str]] = {}
    for n, comps in blocks.items():
        pos = 0
        for ij in comps:
            offsets[ij] = pos
            pos += b.dim(*ij)
        labels[-n] = [x for ij in comps for x in b.labels[ij]]
    space = GradedSpace(labels)
    diff = {}
    for n, comps in blocks.items():
        src_dim = space.dim(-n)
        tgt_dim = space.dim(-n + 1)
        if not tgt_dim:
            continue
        m = RatMatrix(tgt_dim, src_dim)
        for (i, j) in comps:
            c0 = offsets[(i, j)]
            sign = -1 if i % 2 else 1
            for (tgt, mat, s) in (((i + 1, j), b.h(i, j), 1), ((i, j - 1), b.v(i, j), sign)):
                if tgt not in offsets:
                    continue
                r0 = offsets[tgt]
                for r, cc, val in mat.nonzero():
                    m._set(r0 + r, c0 + cc, m[r0 + r, c0 + cc] + s * val)
        diff[-n] = m
    return CochainComplex(space, diff)
