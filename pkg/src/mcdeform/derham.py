"""Polynomial de Rham forms on the standard simplex, over the rationals.

On the ``n``-simplex the barycentric coordinates ``t_0, ..., t_n`` satisfy
``sum t_i = 1``; ``t_0`` and ``dt_0`` are eliminated, so a form is a
polynomial in ``t_1..t_n`` times a wedge of distinct ``dt_1..dt_n``.

A monomial is a key ``(exponents, dts)``: ``exponents`` has length ``n`` and
``dts`` is a strictly increasing tuple of coordinate numbers in ``1..n``.

Structure maps (pullbacks along the coface and codegeneracy maps of simplices):

* ``face(i)`` restricts to the facet ``t_i = 0`` and renumbers the remaining
  coordinates in order, so ``t_j -> t_j`` for ``j < i`` and
  ``t_j -> t_{j-1}`` for ``j > i``.  For ``i = 0`` this makes
  ``t_1 -> 1 - (t_1 + ... + t_{n-1})``.
* ``degeneracy(i)`` pulls back along the collapse of vertices ``i`` and
  ``i + 1``: ``t_j -> t_j`` for ``j < i``, ``t_i -> t_i + t_{i+1}``,
  ``t_j -> t_{j+1}`` for ``j > i``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping

from .errors import DimensionError
from .sparse import add_into

__all__ = ["DeRhamForm", "deRham_differential", "deRham_product", "merge_dts"]


def merge_dts(a: tuple, b: tuple):
    """Wedge of sorted index tuples: ``(sign, merged)``, or ``(0, None)``."""
    if set(a) & set(b):
        return 0, None
    inv = sum(1 for x in a for y in b if x > y)
    return (-1 if inv % 2 else 1), tuple(sorted(a + b))


def _mono_mul(m1, m2):
    s, dts = merge_dts(m1[1], m2[1])
    if not s:
        return 0, None
    return s, (tuple(x + y for x, y in zip(m1[0], m2[0])), dts)


def _mono_d(m) -> dict:
    exps, dts = m
    out: dict = {}
    for i, e in enumerate(exps):
        if not e or (i + 1) in dts:
            continue
        s, nd = merge_dts((i + 1,), dts)
        ne = exps[:i] + (e - 1,) + exps[i + 1:]
        add_into(out, {(ne, nd): Fraction(s * e)})
    return out


class DeRhamForm:
    """Element of the polynomial de Rham algebra of the ``n``-simplex."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Mapping | None = None):
        if n < 0:
            raise DimensionError("simplex dimension must be non-negative")
        self.n = n
        clean: dict = {}
        for (exps, dts), c in (terms or {}).items():
            exps, dts = tuple(exps), tuple(dts)
            if len(exps) != n or any(e < 0 for e in exps):
                raise DimensionError(f"exponent vector {exps} does not fit the {n}-simplex")
            if any(not 1 <= k <= n for k in dts) or list(dts) != sorted(set(dts)):
                raise DimensionError(f"dt indices {dts} must be increasing in 1..{n}")
            if c:
                add_into(clean, {(exps, dts): Fraction(c)})
        self.terms = clean

    # constructors ------------------------------------------------------------

    @classmethod
    def constant(cls, n: int, c=1) -> DeRhamForm:
        return cls(n, {((0,) * n, ()): c})

    @classmethod
    def coordinate(cls, n: int, i: int) -> DeRhamForm:
        """``t_i``; ``t_0`` is ``1 - t_1 - ... - t_n``."""
        if not 0 <= i <= n:
            raise IndexError(f"coordinate t_{i} does not exist on the {n}-simplex")
        if i == 0:
            f = cls.constant(n)
            for k in range(1, n + 1):
                f = f - cls.coordinate(n, k)
            return f
        return cls(n, {(tuple(int(k == i - 1) for k in range(n)), ()): 1})

    @classmethod
    def dt(cls, n: int, i: int) -> DeRhamForm:
        return cls.coordinate(n, i).d()

    # arithmetic --------------------------------------------------------------

    def _check(self, other: DeRhamForm):
        if not isinstance(other, DeRhamForm):
            raise TypeError("expected a de Rham form")
        if other.n != self.n:
            raise DimensionError(f"forms on the {self.n}- and {other.n}-simplex do not combine")

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        add_into(out, other.terms)
        return DeRhamForm(self.n, out)

    def __neg__(self):
        return DeRhamForm(self.n, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return DeRhamForm(self.n, {k: c * other for k, c in self.terms.items()})
        self._check(other)
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                s, m = _mono_mul(m1, m2)
                if s:
                    add_into(out, {m: s * c1 * c2})
        return DeRhamForm(self.n, out)

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, DeRhamForm) and self.n == other.n and self.terms == other.terms

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def d(self) -> DeRhamForm:
        out: dict = {}
        for m, c in self.terms.items():
            add_into(out, _mono_d(m), c)
        return DeRhamForm(self.n, out)

    def degrees(self) -> set[int]:
        return {len(dts) for _, dts in self.terms}

    def polynomial_degree(self) -> int:
        return max((sum(e) for e, _ in self.terms), default=0)

    def component(self, dts: tuple) -> DeRhamForm:
        return DeRhamForm(self.n, {m: c for m, c in self.terms.items() if m[1] == tuple(dts)})

    # structure maps ----------------------------------------------------------

    def pullback(self, m: int, coords: list[DeRhamForm]) -> DeRhamForm:
        """Substitute ``t_j -> coords[j - 1]`` (0-forms on the ``m``-simplex)."""
        if len(coords) != self.n:
            raise DimensionError("need one image per coordinate")
        diffs = [c.d() for c in coords]
        one = DeRhamForm.constant(m)
        powers: dict = {}

        def power(j, e):
            key = (j, e)
            if key not in powers:
                powers[key] = one if e == 0 else power(j, e - 1) * coords[j]
            return powers[key]

        out = DeRhamForm(m)
        for (exps, dts), c in self.terms.items():
            term = one * c
            for j, e in enumerate(exps):
                if e:
                    term = term * power(j, e)
            for k in dts:
                term = term * diffs[k - 1]
            out = out + term
        return out

    def face(self, i: int) -> DeRhamForm:
        n = self.n
        if n == 0 or not 0 <= i <= n:
            raise IndexError(f"face {i} does not exist on the {n}-simplex")
        coords = []
        for j in range(1, n + 1):
            if j < i:
                coords.append(DeRhamForm.coordinate(n - 1, j))
            elif j == i:
                coords.append(DeRhamForm(n - 1))
            else:
                coords.append(DeRhamForm.coordinate(n - 1, j - 1))
        return self.pullback(n - 1, coords)

    def degeneracy(self, i: int) -> DeRhamForm:
        n = self.n
        if not 0 <= i <= n:
            raise IndexError(f"degeneracy {i} does not exist on the {n}-simplex")
        coords = []
        for j in range(1, n + 1):
            if j < i:
                coords.append(DeRhamForm.coordinate(n + 1, j))
            elif j == i:
                coords.append(DeRhamForm.coordinate(n + 1, i) + DeRhamForm.coordinate(n + 1, i + 1))
            else:
                coords.append(DeRhamForm.coordinate(n + 1, j + 1))
        return self.pullback(n + 1, coords)

    def at_vertex(self, v: int) -> Fraction:
        """Value of the 0-form part at vertex ``v``."""
        f = self
        for _ in range(self.n):
            # drop vertex 0 until only vertex v is left, then the last coordinate
            f = f.face(0) if v > 0 else f.face(f.n)
            v = v - 1 if v > 0 else 0
        return f.terms.get(((), ()), Fraction(0))

    # display -----------------------------------------------------------------

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for (exps, dts), c in sorted(self.terms.items()):
            mono = "*".join(f"t{j + 1}" + (f"^{e}" if e > 1 else "")
                            for j, e in enumerate(exps) if e)
            wedge = "^".join(f"dt{k}" for k in dts)
            body = "*".join(x for x in (mono, wedge) if x)
            parts.append(f"{c}" if not body else (body if c == 1 else f"{c}*{body}"))
        return " + ".join(parts)


def deRham_differential(f: DeRhamForm) -> DeRhamForm:
    return f.d()


def deRham_product(f: DeRhamForm, g: DeRhamForm) -> DeRhamForm:
    return f * g
