"""Truncated enveloping algebra used to evaluate exponentials and the gauge action.

A nilpotent DGLA ``N = Tot(L (x) m(A))`` sits inside ``U(L) (x) A`` via
``e_p (x) a -> e_p (x) a``; the graded commutator there restricts to the
bracket of ``N``.  Elements are dicts ``{(word, a): coeff}`` where ``word`` is
a PBW-ordered tuple of basis indices of ``L`` and ``a`` is a basis index of
``m(A)`` or ``UNIT``.  Any term whose ``A`` part vanishes disappears, so a
word of length ``k`` always carries weight at least ``k`` and everything is
finite.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial

from .dgla import NilpotentDGLA
from .errors import ValidationError
from .sparse import add_into, scaled

UNIT = -1


class TruncatedUEA:
    def __init__(self, host: NilpotentDGLA):
        self.host = host
        self.L = host.L
        self.A = host.A
        self._straight: dict[tuple, dict] = {}
        self._par = [self.L.parity(i) for i in range(self.L.dim)]

    # words in U(L) ---------------------------------------------------------

    def word_parity(self, w) -> int:
        return sum(self._par[i] for i in w) & 1

    def straighten(self, w: tuple) -> dict[tuple, Fraction]:
        """PBW normal form: ascending indices, no repeated odd letter.

        ``e_i e_j = (-1)^{|i||j|} e_j e_i + [e_i, e_j]`` for ``i > j`` and
        ``e e = 1/2 [e, e]`` for odd ``e``.  Each rewrite shortens the word or
        removes an inversion, so the recursion terminates.
        """
        hit = self._straight.get(w)
        if hit is not None:
            return hit
        out: dict[tuple, Fraction] = {}
        for k in range(len(w) - 1):
            i, j = w[k], w[k + 1]
            if i > j or (i == j and self._par[i]):
                head, tail = w[:k], w[k + 2:]
                br = self.L.product.get((i, j), {})
                if i > j:
                    sign = -1 if self._par[i] and self._par[j] else 1
                    add_into(out, self.straighten(head + (j, i) + tail), sign)
                    for r, c in br.items():
                        add_into(out, self.straighten(head + (r,) + tail), c)
                else:
                    for r, c in br.items():
                        add_into(out, self.straighten(head + (r,) + tail), c / 2)
                break
        else:
            out = {w: Fraction(1)}
        self._straight[w] = out
        return out

    def _amul(self, a, b) -> dict[int, Fraction]:
        if a == UNIT:
            return {b: Fraction(1)}
        if b == UNIT:
            return {a: Fraction(1)}
        return self.A.product.get((a, b), {})

    def _apar(self, a) -> int:
        return 0 if a == UNIT else self.A.parity(a)

    # algebra ---------------------------------------------------------------

    def one(self):
        return {((), UNIT): Fraction(1)}

    def embed(self, vec) -> dict:
        out: dict = {}
        for k, c in vec.items():
            p, a = self.host.pairs[k]
            add_into(out, {((p,), a): Fraction(c)})
        return out

    def mul(self, x: dict, y: dict) -> dict:
        out: dict = {}
        for (w1, a1), c1 in x.items():
            pa1 = self._apar(a1)
            for (w2, a2), c2 in y.items():
                ab = self._amul(a1, a2)
                if not ab:
                    continue
                sign = -1 if pa1 and self.word_parity(w2) else 1
                for w, cw in self.straighten(w1 + w2).items():
                    for a, ca in ab.items():
                        add_into(out, {(w, a): sign * c1 * c2 * cw * ca})
        return out

    def d(self, x: dict) -> dict:
        """Derivation extending ``d_L`` on letters and ``d_A`` on coefficients."""
        out: dict = {}
        for (w, a), c in x.items():
            sign = 1
            for k, i in enumerate(w):
                for r, cr in self.L.diff.get(i, {}).items():
                    nw = w[:k] + (r,) + w[k + 1:]
                    for sw, cs in self.straighten(nw).items():
                        add_into(out, {(sw, a): sign * c * cr * cs})
                if self._par[i]:
                    sign = -sign
            if a != UNIT:
                s2 = -1 if self.word_parity(w) else 1
                for b, cb in self.A.diff.get(a, {}).items():
                    add_into(out, {(w, b): s2 * c * cb})
        return out

    def power_series(self, x: dict, coeffs) -> dict:
        """``sum_n coeffs(n) x^n`` (n >= 0), stopping once ``x^n = 0``."""
        out = scaled(self.one(), coeffs(0))
        term = self.one()
        n = 0
        while True:
            n += 1
            term = self.mul(term, x)
            if not term:
                return out
            add_into(out, term, coeffs(n))

    def exp(self, x: dict) -> dict:
        if ((), UNIT) in x:
            raise ValidationError("exp needs an element of the augmentation ideal")
        return self.power_series(x, lambda n: Fraction(1, factorial(n)))

    def log(self, g: dict) -> dict:
        if g.get(((), UNIT)) != 1:
            raise ValidationError("log needs an element of the form 1 + nilpotent")
        y = dict(g)
        del y[((), UNIT)]
        return self.power_series(y, lambda n: Fraction((-1) ** (n + 1), n) if n else 0)

    def to_lie(self, x: dict) -> dict[int, Fraction]:
        """Back to coordinates of the host; fails unless ``x`` is primitive."""
        out: dict[int, Fraction] = {}
        for (w, a), c in x.items():
            if len(w) != 1 or a == UNIT:
                raise ValidationError("element is not in the image of the Lie algebra")
            add_into(out, {self.host.pair_index[(w[0], a)]: c})
        return out

    def commutator(self, x: dict, y: dict, deg_x: int, deg_y: int) -> dict:
        out = self.mul(x, y)
        add_into(out, self.mul(y, x), 1 if (deg_x * deg_y) % 2 else -1)
        return out
