"""Small named DGLAs used by the batteries, the CLI and the tests."""

from __future__ import annotations

from .complexes import CochainComplex, GradedSpace
from .dgla import DGLA, GradedAlgebra, der_dgla, end_dgla
from .qlinalg import RatMatrix

__all__ = ["zero_dgla", "abelian_line", "obstructed_dgla", "heisenberg",
           "exterior_derivations", "end_examples", "zoo", "named"]


def zero_dgla() -> DGLA:
    return DGLA([], [], name="zero")


def abelian_line(n: int) -> DGLA:
    """One basis vector in cochain degree ``n``, zero bracket and differential."""
    return DGLA(["w"], [n], name=f"Labh{n}")


def obstructed_dgla() -> DGLA:
    """``u`` in degree 1, ``v`` in degree 2, ``[u, u] = 2v``."""
    return DGLA(["u", "v"], [1, 2], {("u", "u"): {"v": 2}}, name="Lobs")


def heisenberg() -> DGLA:
    """Degree-0 Heisenberg algebra, ``[X, Y] = Z`` central."""
    return DGLA(["X", "Y", "Z"], [0, 0, 0], {("X", "Y"): {"Z": 1}, ("Y", "X"): {"Z": -1}},
                name="Heis")


def exterior_derivations() -> DGLA:
    """Derivations of the exterior algebra on one generator of chain degree 1."""
    R = GradedAlgebra(["1", "y"], [0, 1], {}, {}, flavor="graded-commutative", unit="1")
    return der_dgla(R, name="Der(Lambda y)")


def _complex(labels: dict, d: dict | None = None) -> CochainComplex:
    space = GradedSpace(labels)
    diff = {}
    for n, cols in (d or {}).items():
        diff[n] = RatMatrix.from_columns(cols, rows=space.dim(n + 1))
    return CochainComplex(space, diff)


def end_examples() -> list[DGLA]:
    """End(V) for a few complexes of total dimension at most 4."""
    specs = [
        ("End(k)", {0: ["a"]}, None),
        ("End(k -> k)", {0: ["a"], 1: ["b"]}, {0: [[1]]}),
        ("End(k + k[-1])", {0: ["a"], 1: ["b"]}, None),
        ("End(k2 -> k2)", {0: ["a", "b"], 1: ["c", "d"]}, {0: [[1, 0], [0, 0]]}),
    ]
    return [end_dgla(_complex(lab, d), name=nm) for nm, lab, d in specs]


def zoo(include_heisenberg: bool = True) -> list[DGLA]:
    out = [zero_dgla(), abelian_line(0), abelian_line(1), abelian_line(2), obstructed_dgla()]
    out += end_examples()
    out.append(exterior_derivations())
    if include_heisenberg:
        out.append(heisenberg())
    return out


def named(name: str) -> DGLA:
    for L in zoo():
        if L.name == name:
            return L
    raise KeyError(f"no zoo DGLA called {name!r}")
