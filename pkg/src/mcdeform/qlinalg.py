"""Exact linear algebra over the rationals.

Matrices are stored as sparse rows of :class:`fractions.Fraction`.  Every
basis this module hands out is read off a reduced row echelon form with the
columns taken in ascending order, so repeated runs give identical output.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DimensionError, ValidationError

__all__ = [
    "RatMatrix",
    "Echelon",
    "as_fraction",
    "kernel_basis",
    "solve",
    "rank",
    "image_basis",
    "subquotient",
    "subquotient_dim",
    "complement_indices",
]


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floating point scalars are not accepted")
    return Fraction(x)


class RatMatrix:
    """A rows x cols matrix of exact rationals (sparse row storage)."""

    __slots__ = ("rows", "cols", "_rows")

    def __init__(self, rows: int, cols: int, entries=None):
        if rows < 0 or cols < 0:
            raise DimensionError("negative matrix shape")
        self.rows = rows
        self.cols = cols
        self._rows: list[dict[int, Fraction]] = [dict() for _ in range(rows)]
        if entries is None:
            return
        if isinstance(entries, dict):
            for (i, j), v in entries.items():
                self._set(i, j, v)
        else:
            entries = list(entries)
            if len(entries) != rows:
                raise DimensionError(f"expected {rows} rows, got {len(entries)}")
            for i, row in enumerate(entries):
                row = list(row)
                if len(row) != cols:
                    raise DimensionError(f"row {i} has {len(row)} entries, expected {cols}")
                for j, v in enumerate(row):
                    self._set(i, j, v)

    def _set(self, i, j, v):
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise DimensionError(f"index ({i}, {j}) outside {self.rows}x{self.cols}")
        v = as_fraction(v)
        if v:
            self._rows[i][j] = v
        else:
            self._rows[i].pop(j, None)

    # construction -----------------------------------------------------

    @classmethod
    def zeros(cls, rows, cols):
        return cls(rows, cols)

    @classmethod
    def identity(cls, n):
        return cls(n, n, {(i, i): 1 for i in range(n)})

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int | None = None):
        columns = [list(c) for c in columns]
        if rows is None:
            if not columns:
                raise DimensionError("row count needed for an empty column list")
            rows = len(columns[0])
        m = cls(rows, len(columns))
        for j, col in enumerate(columns):
            if len(col) != rows:
                raise DimensionError("ragged columns")
            for i, v in enumerate(col):
                m._set(i, j, v)
        return m

    @classmethod
    def from_sparse_rows(cls, rows, cols, sparse_rows):
        m = cls(rows, cols)
        for i, r in enumerate(sparse_rows):
            for j, v in r.items():
                m._set(i, j, v)
        return m

    @classmethod
    def block(cls, blocks):
        """Assemble from a 2-d list of matrices with matching shapes."""
        heights = [row[0].rows for row in blocks]
        widths = [m.cols for m in blocks[0]]
        out = cls(sum(heights), sum(widths))
        r0 = 0
        for bi, row in enumerate(blocks):
            c0 = 0
            for bj, m in enumerate(row):
                if m.rows != heights[bi] or m.cols != widths[bj]:
                    raise DimensionError("block shapes do not line up")
                for i, r in enumerate(m._rows):
                    for j, v in r.items():
                        out._rows[r0 + i][c0 + j] = v
                c0 += widths[bj]
            r0 += heights[bi]
        return out

    # access -----------------------------------------------------------

    @property
    def shape(self):
        return (self.rows, self.cols)

    def __getitem__(self, ij):
        i, j = ij
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise DimensionError(f"index ({i}, {j}) outside {self.rows}x{self.cols}")
        return self._rows[i].get(j, Fraction(0))

    def row(self, i) -> dict[int, Fraction]:
        return dict(self._rows[i])

    def column(self, j) -> list[Fraction]:
        return [r.get(j, Fraction(0)) for r in self._rows]

    def columns(self) -> list[list[Fraction]]:
        return [self.column(j) for j in range(self.cols)]

    def to_lists(self) -> list[list[Fraction]]:
        return [[r.get(j, Fraction(0)) for j in range(self.cols)] for r in self._rows]

    def nonzero(self):
        for i, r in enumerate(self._rows):
            for j, v in r.items():
                yield i, j, v

    def is_zero(self) -> bool:
        return not any(self._rows)

    def __eq__(self, other):
        if not isinstance(other, RatMatrix):
            return NotImplemented
        return self.shape == other.shape and self._rows == other._rows

    def __repr__(self):
        return f"RatMatrix({self.rows}x{self.cols}, {self.to_lists()})"

    # arithmetic -------------------------------------------------------

    @property
    def T(self):
        out = RatMatrix(self.cols, self.rows)
        for i, r in enumerate(self._rows):
            for j, v in r.items():
                out._rows[j][i] = v
        return out

    def __add__(self, other):
        if self.shape != other.shape:
            raise DimensionError(f"cannot add {self.shape} and {other.shape}")
        out = self.copy()
        for i, r in enumerate(other._rows):
            orow = out._rows[i]
            for j, v in r.items():
                s = orow.get(j, 0) + v
                if s:
                    orow[j] = s
                else:
                    orow.pop(j, None)
        return out

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = as_fraction(c)
        out = RatMatrix(self.rows, self.cols)
        if c:
            out._rows = [{j: c * v for j, v in r.items()} for r in self._rows]
        return out

    def copy(self):
        out = RatMatrix(self.rows, self.cols)
        out._rows = [dict(r) for r in self._rows]
        return out

    def __matmul__(self, other):
        if isinstance(other, RatMatrix):
            if self.cols != other.rows:
                raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
            out = RatMatrix(self.rows, other.cols)
            for i, r in enumerate(self._rows):
                acc: dict[int, Fraction] = {}
                for k, v in r.items():
                    for j, w in other._rows[k].items():
                        acc[j] = acc.get(j, 0) + v * w
                out._rows[i] = {j: v for j, v in acc.items() if v}
            return out
        vec = list(other)
        if len(vec) != self.cols:
            raise DimensionError(f"vector of length {len(vec)} for {self.shape} matrix")
        return [sum((v * vec[j] for j, v in r.items()), Fraction(0)) for r in self._rows]

    def apply_sparse(self, vec: dict[int, Fraction]) -> dict[int, Fraction]:
        """Multiply by a sparse column vector given as {index: value}."""
        out = {}
        for i, r in enumerate(self._rows):
            s = Fraction(0)
            for j, v in r.items():
                w = vec.get(j)
                if w:
                    s += v * w
            if s:
                out[i] = s
        return out

    def rank(self) -> int:
        return len(rref(self)[1])


# --------------------------------------------------------------------------
# elimination


def rref(m: RatMatrix, rhs: Sequence | None = None):
    """Reduced row echelon form.

    Returns ``(rows, pivots, rhs)`` where ``rows[k]`` is the k-th nonzero
    reduced row (sparse), ``pivots[k]`` its pivot column (ascending) and
    ``rhs`` the correspondingly transformed right-hand side (or ``None``).
    For an inconsistent system the returned rhs has a nonzero entry past
    ``len(pivots)``.
    """
    work = [dict(r) for r in m._rows]
    b = None if rhs is None else [as_fraction(x) for x in rhs]
    # column -> rows with a nonzero there; rebuilt lazily is simpler and fast enough
    pivots: list[int] = []
    pivot_rows: list[dict[int, Fraction]] = []
    remaining = list(range(len(work)))
    for col in range(m.cols):
        pr = None
        best = None
        for idx in remaining:
            v = work[idx].get(col)
            if v:
                size = len(work[idx])
                if best is None or size < best:
                    pr, best = idx, size
        if pr is None:
            continue
        remaining.remove(pr)
        prow = work[pr]
        inv = 1 / prow[col]
        prow = {j: v * inv for j, v in prow.items()}
        work[pr] = prow
        if b is not None:
            b[pr] *= inv
        for idx in remaining:
            r = work[idx]
            f = r.get(col)
            if f:
                for j, v in prow.items():
                    s = r.get(j, 0) - f * v
                    if s:
                        r[j] = s
                    else:
                        r.pop(j, None)
                if b is not None:
                    b[idx] -= f * b[pr]
        pivots.append(col)
        pivot_rows.append(pr)
    # back substitution: clear entries above pivots
    reduced = [work[pr] for pr in pivot_rows]
    red_rhs = [b[pr] for pr in pivot_rows] if b is not None else None
    for k in range(len(pivots) - 1, -1, -1):
        col = pivots[k]
        row_k = reduced[k]
        for i in range(k):
            f = reduced[i].get(col)
            if f:
                r = reduced[i]
                for j, v in row_k.items():
                    s = r.get(j, 0) - f * v
                    if s:
                        r[j] = s
                    else:
                        r.pop(j, None)
                if red_rhs is not None:
                    red_rhs[i] -= f * red_rhs[k]
    if b is not None:
        leftover = [b[idx] for idx in remaining]
        red_rhs = red_rhs + leftover
    return reduced, pivots, red_rhs


def rank(m: RatMatrix) -> int:
    return len(rref(m)[1])


def kernel_basis(m: RatMatrix) -> list[list[Fraction]]:
    """Basis of {x : m x = 0}, one vector per free column in ascending order."""
    rows, pivots, _ = rref(m)
    pivset = set(pivots)
    basis = []
    for f in range(m.cols):
        if f in pivset:
            continue
        x = [Fraction(0)] * m.cols
        x[f] = Fraction(1)
        for r, p in zip(rows, pivots):
            v = r.get(f)
            if v:
                x[p] = -v
        basis.append(x)
    return basis


def solve(m: RatMatrix, b: Sequence) -> list[Fraction] | None:
    """Particular solution of m x = b with free variables zero, or None."""
    b = list(b)
    if len(b) != m.rows:
        raise DimensionError(f"right-hand side has length {len(b)}, matrix has {m.rows} rows")
    rows, pivots, rhs = rref(m, b)
    if any(rhs[len(pivots):]):
        return None
    x = [Fraction(0)] * m.cols
    for k, p in enumerate(pivots):
        x[p] = rhs[k]
    return x


def image_basis(m: RatMatrix) -> list[list[Fraction]]:
    """The pivot columns of ``m`` (a basis of its column space)."""
    _, pivots, _ = rref(m)
    return [m.column(j) for j in pivots]


class Echelon:
    """Incrementally built echelon basis of a subspace of Q^n.

    Vectors are sparse dicts.  ``reduce`` returns the remainder of a vector
    modulo the span together with the coordinates used, which makes this the
    workhorse for "complete modulo a subspace" and "express in a basis".
    """

    def __init__(self, n: int, track: bool = True):
        self.n = n
        self.track = track
        self.rows: list[dict[int, Fraction]] = []  # normalised at their pivot
        self.pivots: list[int] = []
        self._pivot_index: dict[int, int] = {}
        # coords[k] expresses rows[k] in terms of the inserted vectors
        self.coords: list[dict[int, Fraction]] = []
        self.inserted = 0

    def __len__(self):
        return len(self.rows)

    def reduce(self, vec: dict[int, Fraction]):
        """Return (remainder, combo) with vec = remainder + sum combo[k] * accepted[k].

        ``accepted[k]`` is the k-th vector for which :meth:`add` returned True.
        ``combo`` is empty when the echelon was built with ``track=False``.
        """
        r = {j: as_fraction(v) for j, v in vec.items() if v}
        combo: dict[int, Fraction] = {}
        # rows are fully reduced: subtracting one never reintroduces a pivot
        for col in [c for c in r if c in self._pivot_index]:
            f = r[col]
            k = self._pivot_index[col]
            for j, v in self.rows[k].items():
                s = r.get(j, 0) - f * v
                if s:
                    r[j] = s
                else:
                    r.pop(j, None)
            if not self.track:
                continue
            for j, v in self.coords[k].items():
                s = combo.get(j, 0) + f * v
                if s:
                    combo[j] = s
                else:
                    combo.pop(j, None)
        return r, combo

    def contains(self, vec) -> bool:
        return not self.reduce(vec)[0]

    def add(self, vec) -> bool:
        """Insert ``vec``; returns False (and records nothing) if dependent."""
        r, combo = self.reduce(vec)
        idx = self.inserted
        if not r:
            return False
        self.inserted += 1
        col = min(r)
        inv = 1 / r[col]
        row = {j: v * inv for j, v in r.items()}
        coord = {}
        if self.track:
            coord = {j: -v * inv for j, v in combo.items()}
            coord[idx] = inv
        # keep rows fully reduced at the new pivot
        for k, other in enumerate(self.rows):
            f = other.get(col)
            if f:
                for j, v in row.items():
                    s = other.get(j, 0) - f * v
                    if s:
                        other[j] = s
                    else:
                        other.pop(j, None)
                oc = self.coords[k]
                for j, v in coord.items():  # empty when untracked
                    s = oc.get(j, 0) - f * v
                    if s:
                        oc[j] = s
                    else:
                        oc.pop(j, None)
        self._pivot_index[col] = len(self.rows)
        self.rows.append(row)
        self.pivots.append(col)
        self.coords.append(coord)
        return True


def _dense(vec: dict[int, Fraction], n: int) -> list[Fraction]:
    out = [Fraction(0)] * n
    for j, v in vec.items():
        out[j] = v
    return out


def _sparse(vec: Sequence) -> dict[int, Fraction]:
    return {j: as_fraction(v) for j, v in enumerate(vec) if v}


def subquotient(d_in: RatMatrix, d_out: RatMatrix):
    """Cohomology ker(d_out)/im(d_in) at the middle space.

    Returns ``(dim, representatives)``: kernel-basis vectors of ``d_out``,
    in order, kept whenever they are independent modulo the image of
    ``d_in`` and the representatives already chosen.
    """
    if d_in.rows != d_out.cols:
        raise DimensionError(
            f"d_in lands in dimension {d_in.rows} but d_out starts from {d_out.cols}"
        )
    if not (d_out @ d_in).is_zero():
        raise ValidationError("d_out . d_in != 0; not a complex at this spot")
    n = d_out.cols
    ech = Echelon(n)
    for col in image_basis(d_in):
        ech.add(_sparse(col))
    reps = []
    for v in kernel_basis(d_out):
        if ech.add(_sparse(v)):
            reps.append(v)
    return len(reps), reps


def subquotient_dim(d_in: RatMatrix, d_out: RatMatrix) -> int:
    return subquotient(d_in, d_out)[0]


def complement_indices(vectors: Iterable[Sequence], n: int) -> list[int]:
    """Ascending unit-vector indices completing span(vectors) to Q^n."""
    ech = Echelon(n)
    for v in vectors:
        ech.add(_sparse(v))
    out = []
    for j in range(n):
        if ech.add({j: Fraction(1)}):
            out.append(j)
    return out
