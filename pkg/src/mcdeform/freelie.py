"""Free graded Lie algebras, truncated by weight, realised inside the tensor algebra.

Generators carry a cochain degree and a positive weight.  Lie elements are
stored as non-commutative polynomials ``{word: coeff}`` (words are tuples of
generator indices) with ``[x, y] = xy - (-1)^{|x||y|} yx``.  The basis in
each weight is chosen greedily among right-normed brackets
``[g1, [g2, [..., gk]]]`` enumerated in lexicographic order of
``(g1, ..., gk)``; a bracket is kept when it is independent of those kept
before.  This is deterministic and, unlike a Lyndon basis, needs no special
treatment of squares of odd elements.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .errors import ValidationError
from .qlinalg import Echelon
from .sparse import add_into


def tensor_mul(x: dict, y: dict) -> dict:
    out: dict = {}
    for w1, c1 in x.items():
        for w2, c2 in y.items():
            add_into(out, {w1 + w2: c1 * c2})
    return out


class FreeLie:
    """Free graded Lie algebra on ``len(degrees)`` generators.

    ``weights`` lists for which total weights a basis is built; brackets or
    differentials leaving these weights are truncated to zero.
    """

    def __init__(self, degrees: Sequence[int], gen_weights: Sequence[int],
                 weights: Sequence[int], labels: Sequence[str] | None = None):
        self.gdeg = list(degrees)
        self.gwt = list(gen_weights)
        self.glabels = list(labels) if labels else [f"x{i}" for i in range(len(degrees))]
        self.weights = sorted(set(weights))
        self._word_index: dict[tuple, int] = {}
        self._ech: dict[int, Echelon] = {}
        self.elements: list[dict] = []     # tensor form
        self.trees: list[tuple] = []       # right-normed generator sequence
        self.degree: list[int] = []
        self.weight: list[int] = []
        self._by_weight: dict[int, list[int]] = {}
        self._suffix: dict[tuple, dict] = {}
        for w in self.weights:
            self._build_weight(w)

    # words ------------------------------------------------------------------

    def word_degree(self, word) -> int:
        return sum(self.gdeg[g] for g in word)

    def word_weight(self, word) -> int:
        return sum(self.gwt[g] for g in word)

    def _idx(self, word) -> int:
        k = self._word_index.get(word)
        if k is None:
            k = len(self._word_index)
            self._word_index[word] = k
        return k

    def _flat(self, elem: dict) -> dict:
        return {self._idx(w): c for w, c in elem.items()}

    def commutator(self, x: dict, dx: int, y: dict, dy: int) -> dict:
        out = tensor_mul(x, y)
        add_into(out, tensor_mul(y, x), 1 if (dx * dy) % 2 else -1)
        return out

    def right_normed(self, seq: tuple) -> dict:
        hit = self._suffix.get(seq)
        if hit is not None:
            return hit
        if len(seq) == 1:
            out = {seq: Fraction(1)}
        else:
            rest = self.right_normed(seq[1:])
            out = self.commutator({(seq[0],): Fraction(1)}, self.gdeg[seq[0]],
                                  rest, self.word_degree(seq[1:]))
        self._suffix[seq] = out
        return out

    def _sequences(self, w: int):
        gens = sorted(range(len(self.gdeg)))

        def rec(remaining, prefix):
            if remaining == 0:
                yield tuple(prefix)
                return
            for g in gens:
                if self.gwt[g] <= remaining:
                    prefix.append(g)
                    yield from rec(remaining - self.gwt[g], prefix)
                    prefix.pop()

        yield from rec(w, [])

    def _build_weight(self, w: int):
        ech = Echelon(0, track=True)  # sparse; the ambient size is unused
        self._ech[w] = ech
        self._by_weight[w] = []
        for seq in self._sequences(w):
            elem = self.right_normed(seq)
            if not elem:
                continue
            if ech.add(self._flat(elem)):
                k = len(self.elements)
                self.elements.append(elem)
                self.trees.append(seq)
                self.degree.append(self.word_degree(seq))
                self.weight.append(w)
                self._by_weight[w].append(k)

    # queries ----------------------------------------------------------------

    @property
    def dim(self) -> int:
        return len(self.elements)

    def basis_in_weight(self, w: int) -> list[int]:
        return self._by_weight.get(w, [])

    def label(self, k: int) -> str:
        seq = self.trees[k]
        s = self.glabels[seq[-1]]
        for g in reversed(seq[:-1]):
            s = f"[{self.glabels[g]},{s}]"
        return s

    def express(self, elem: dict) -> dict[int, Fraction]:
        """Coordinates of a Lie element; words of untracked weights are dropped."""
        by_w: dict[int, dict] = {}
        for word, c in elem.items():
            w = self.word_weight(word)
            if w in self._ech:
                by_w.setdefault(w, {})[word] = c
        out: dict[int, Fraction] = {}
        for w, part in by_w.items():
            rem, combo = self._ech[w].reduce(self._flat(part))
            if rem:
                raise ValidationError("element is not a Lie polynomial")
            basis = self._by_weight[w]
            for j, c in combo.items():
                add_into(out, {basis[j]: c})
        return out

    def bracket(self, i: int, j: int) -> dict[int, Fraction]:
        if self.weight[i] + self.weight[j] not in self._ech:
            return {}
        return self.express(self.commutator(self.elements[i], self.degree[i],
                                            self.elements[j], self.degree[j]))

    def derivation(self, elem: dict, gen_images: Sequence[dict]) -> dict:
        """Apply the degree-1 derivation determined by tensor images of generators."""
        out: dict = {}
        for word, c in elem.items():
            sign = 1
            for k, g in enumerate(word):
                img = gen_images[g]
                if img:
                    head, tail = word[:k], word[k + 1:]
                    for w2, c2 in img.items():
                        add_into(out, {head + w2 + tail: sign * c * c2})
                if self.gdeg[g] % 2:
                    sign = -sign
        return out

    def evaluate(self, k: int, images: Sequence[dict], bracket) -> dict:
        """Image of basis element ``k`` under the Lie map sending generator
        ``g`` to ``images[g]`` in a Lie algebra with the given bracket."""
        seq = self.trees[k]
        val = images[seq[-1]]
        for g in reversed(seq[:-1]):
            val = bracket(images[g], val)
        return val
