"""Flat labelled bases carrying a bilinear product and a differential.

Both DGLAs and Artinian cdgas are stored this way: basis element ``i`` has
a label and a *cochain* degree, ``product[(i, j)]`` is the sparse expansion
of ``e_i * e_j`` and ``diff[i]`` that of ``d e_i`` (degree +1).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Sequence

from .complexes import CochainComplex, GradedSpace
from .errors import DimensionError, ValidationError
from .qlinalg import RatMatrix
from .sparse import add_into, add_term


def _clean_table(table, dim, arity):
    out = {}
    for key, vec in table.items():
        idx = key if arity == 2 else key
        vec = {int(k): Fraction(v) for k, v in vec.items() if v}
        if not vec:
            continue
        keys = idx if arity == 2 else (idx,)
        for k in keys:
            if not 0 <= k < dim:
                raise DimensionError(f"structure constant index {k} out of range")
        for k in vec:
            if not 0 <= k < dim:
                raise DimensionError(f"structure constant index {k} out of range")
        out[key] = vec
    return out


def normalize_table(labels, table, arity):
    """Accept label- or index-keyed structure constants; return index form."""
    index = {x: i for i, x in enumerate(labels)}

    def idx(k):
        if isinstance(k, str):
            if k not in index:
                raise KeyError(f"unknown basis label {k!r}")
            return index[k]
        return int(k)

    out = {}
    for key, vec in (table or {}).items():
        key = (idx(key[0]), idx(key[1])) if arity == 2 else idx(key)
        tgt = out.setdefault(key, {})
        for k, v in vec.items():
            add_term(tgt, idx(k), Fraction(v))
    return out


class GradedStructure:
    """Common storage and linear helpers; subclasses add the axioms."""

    def __init__(self, labels: Sequence[str], degrees: Sequence[int],
                 product: Mapping | None = None, diff: Mapping | None = None):
        labels = tuple(str(x) for x in labels)
        if len(labels) != len(degrees):
            raise DimensionError("one degree per label is required")
        if len(set(labels)) != len(labels):
            raise ValidationError("basis labels must be distinct")
        self.labels = labels
        self.cdeg = tuple(int(d) for d in degrees)
        self._index = {x: i for i, x in enumerate(labels)}
        self.product: dict[tuple[int, int], dict[int, Fraction]] = _clean_table(
            dict(product or {}), len(labels), 2)
        self.diff: dict[int, dict[int, Fraction]] = _clean_table(
            dict(diff or {}), len(labels), 1)
        for (i, j), vec in self.product.items():
            for k in vec:
                if self.cdeg[k] != self.cdeg[i] + self.cdeg[j]:
                    raise ValidationError(
                        f"product {labels[i]}*{labels[j]} -> {labels[k]} is not homogeneous")
        for i, vec in self.diff.items():
            for k in vec:
                if self.cdeg[k] != self.cdeg[i] + 1:
                    raise ValidationError(f"d({labels[i]}) -> {labels[k]} has the wrong degree")

    @property
    def dim(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise KeyError(f"unknown basis label {label!r}") from None

    def parity(self, i: int) -> int:
        return self.cdeg[i] & 1

    def by_degree(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {}
        for i, n in enumerate(self.cdeg):
            out.setdefault(n, []).append(i)
        return dict(sorted(out.items()))

    def indices_in_degree(self, n: int) -> list[int]:
        return [i for i, d in enumerate(self.cdeg) if d == n]

    def vector_degree(self, vec) -> int | None:
        """Degree of a homogeneous vector (None for zero); raises if mixed."""
        degs = {self.cdeg[i] for i in vec}
        if len(degs) > 1:
            raise ValidationError("vector is not homogeneous")
        return degs.pop() if degs else None

    # bilinear / linear application -------------------------------------

    def mul(self, x: Mapping[int, Fraction], y: Mapping[int, Fraction]) -> dict[int, Fraction]:
        out: dict[int, Fraction] = {}
        prod = self.product
        for i, a in x.items():
            for j, b in y.items():
                vec = prod.get((i, j))
                if vec:
                    add_into(out, vec, a * b)
        return out

    def d(self, x: Mapping[int, Fraction]) -> dict[int, Fraction]:
        out: dict[int, Fraction] = {}
        for i, a in x.items():
            vec = self.diff.get(i)
            if vec:
                add_into(out, vec, a)
        return out

    def basis_vector(self, i) -> dict[int, Fraction]:
        if isinstance(i, str):
            i = self.index(i)
        return {i: Fraction(1)}

    def vector(self, coeffs: Mapping) -> dict[int, Fraction]:
        """Sparse vector from ``{label or index: coefficient}``."""
        out: dict[int, Fraction] = {}
        for k, v in coeffs.items():
            i = self.index(k) if isinstance(k, str) else int(k)
            add_term(out, i, Fraction(v))
        return out

    def format_vector(self, vec) -> str:
        if not vec:
            return "0"
        parts = []
        for i in sorted(vec):
            c = vec[i]
            parts.append(f"{c}*{self.labels[i]}" if c != 1 else self.labels[i])
        return " + ".join(parts)

    # complexes -----------------------------------------------------------

    def complex(self, validate: bool = True) -> CochainComplex:
        """Underlying cochain complex; degree-n basis in flat order."""
        bd = self.by_degree()
        pos = {i: k for idxs in bd.values() for k, i in enumerate(idxs)}
        space = GradedSpace({n: [self.labels[i] for i in idxs] for n, idxs in bd.items()})
        diff = {}
        for n, idxs in bd.items():
            tgt = bd.get(n + 1)
            if not tgt:
                continue
            m = RatMatrix(len(tgt), len(idxs))
            for c, i in enumerate(idxs):
                for k, v in self.diff.get(i, {}).items():
                    m._set(pos[k], c, v)
            diff[n] = m
        return CochainComplex(space, diff, validate=validate)

    def to_degree_coords(self, vec, n: int) -> list[Fraction]:
        idxs = self.indices_in_degree(n)
        return [Fraction(vec.get(i, 0)) for i in idxs]

    def from_degree_coords(self, coords, n: int) -> dict[int, Fraction]:
        idxs = self.indices_in_degree(n)
        if len(coords) != len(idxs):
            raise DimensionError(f"degree {n} has dimension {len(idxs)}, got {len(coords)}")
        return {i: Fraction(c) for i, c in zip(idxs, coords) if c}

    def differential_matrix(self, n: int) -> RatMatrix:
        src = self.indices_in_degree(n)
        tgt = self.indices_in_degree(n + 1)
        pos = {i: k for k, i in enumerate(tgt)}
        m = RatMatrix(len(tgt), len(src))
        for c, i in enumerate(src):
            for k, v in self.diff.get(i, {}).items():
                m._set(pos[k], c, v)
        return m

    def same_as(self, other) -> bool:
        """Identical presentation (labels, degrees, tables)."""
        return (type(self) is type(other) and self.labels == other.labels
                and self.cdeg == other.cdeg and self.product == other.product
                and self.diff == other.diff)

    def check_d_squared(self):
        for i in range(self.dim):
            if self.d(self.d({i: Fraction(1)})):
                raise ValidationError(f"d^2 != 0 on {self.labels[i]}")
