"""Deformation functors evaluated through algorithms, and the condition batteries.

Functors are never enumerated: on square-zero coefficients they are
presented as subquotients of ``Tot(L (x) m(A))^1``, and elsewhere they are
probed with seeded samples, lifts and explicit gluing.  Every "surjective"
axiom is checked by producing a witness for each sampled element.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field

from .artin import (ArtinCdga, CdgaMap, augmentation, base_field,
                    cone_extension, dual_numbers, fiber_product, square_zero,
                    truncated_polynomial)
from .complexes import CochainComplex, ChainMap, GradedSpace, cone, shift
from .dgla import DGLA, NilpotentDGLA, coefficient_extension, induced_map
from .errors import ValidationError
from .mcgauge import (GaugeElement, MCElement, acyclic_lift, gauge_act,
                      gauge_equivalence_witness, lift_across_small_extension,
                      lift_along_surjection, lift_gauge, obstruction_via_cone, pushforward,
                      sample_gauge, sample_mc)
from .qlinalg import RatMatrix, rank
from .simplicial import nerve_pi_square_zero
from .sparse import add_into

__all__ = [
    "FunctorUnderTest",
    "TangentReport",
    "tangent_of_functor",
    "tangent_report",
    "dd_groups",
    "dd_splitting",
    "Cospan",
    "Extension",
    "Battery",
    "standard_battery",
    "BatteryItem",
    "BatteryReport",
    "manetti_battery",
    "schlessinger_homotopy_battery",
    "glue_mc",
    "split_mc",
]

KINDS = ("mc", "def", "constant")


# functors ---------------------------------------------------------------------------

class FunctorUnderTest:
    """``MC(L, -)``, ``Def(L, -)`` or the constant one-point functor.

    ``gauge_disabled_on`` names battery diagrams on which a ``def`` functor
    forgets the gauge quotient; it exists to build a deliberately broken
    functor for the batteries.
    """

    def __init__(self, kind: str, L: DGLA | None = None, name: str | None = None,
                 gauge_disabled_on=()):
        if kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}")
        if kind != "constant" and L is None:
            raise ValueError("MC and Def functors need a DGLA")
        self.kind = kind
        self.L = L
        self.gauge_disabled_on = frozenset(gauge_disabled_on)
        base = {"mc": "MC", "def": "Def", "constant": "const"}[kind]
        self.name = name or (f"{base}({L.name or 'L'},-)" if L is not None else base)
        self._hosts: dict = {}

    @classmethod
    def maurer_cartan(cls, L: DGLA) -> FunctorUnderTest:
        return cls("mc", L)

    @classmethod
    def deformations(cls, L: DGLA) -> FunctorUnderTest:
        return cls("def", L)

    @classmethod
    def constant(cls) -> FunctorUnderTest:
        return cls("constant")

    @classmethod
    def broken(cls, L: DGLA, diagram: str) -> FunctorUnderTest:
        return cls("def", L, name=f"Def({L.name or 'L'},-) without gauge on {diagram}",
                   gauge_disabled_on=[diagram])

    def host(self, A: ArtinCdga) -> NilpotentDGLA:
        N = self._hosts.get(id(A))
        if N is None or N.A is not A:
            N = coefficient_extension(self.L, A, validate=False)
            self._hosts[id(A)] = N
        return N

    def uses_gauge(self, diagram: str | None = None) -> bool:
        return self.kind == "def" and diagram not in self.gauge_disabled_on

    def at_point(self) -> int:
        """Number of elements of ``F(k)``."""
        if self.kind == "constant":
            return 1
        return 1 if self.host(base_field()).dim == 0 else 0  # pragma: no branch

    def presentation(self, A: ArtinCdga, diagram: str | None = None):
        """``(host, cocycle matrix, boundary matrix)`` in degree 1, square-zero ``A`` only."""
        if A.product:
            raise ValidationError("linear presentations need square-zero coefficients")
        N = self.host(A)
        c = N.complex(validate=False)
        n = len(N.indices_in_degree(1))
        from .qlinalg import kernel_basis
        Z = RatMatrix.from_columns(kernel_basis(c.d(1)), rows=n)
        B = c.d(0) if self.uses_gauge(diagram) else RatMatrix(n, 0)
        return N, Z, B

    def square_zero_dim(self, A: ArtinCdga, diagram: str | None = None) -> int:
        if self.kind == "constant":
            return 0
        _, Z, B = self.presentation(A, diagram)
        return Z.shape[1] - rank(B)


def tangent_of_functor(F: FunctorUnderTest, n: int) -> int:
    """``dim F(k[eps_n])``."""
    return F.square_zero_dim(dual_numbers(n))


def dd_groups(F: FunctorUnderTest, V: CochainComplex, n: int, i: int) -> int:
    """``dim pi_i F(k (+) V[n])`` through the nerve of ``L``; ``V`` is a chain
    complex stored cochain-graded (chain degree ``j`` at cochain ``-j``)."""
    if F.kind == "constant":
        return 0
    return nerve_pi_square_zero(F.L, square_zero(shift(V, n)), i)


def dd_splitting(F: FunctorUnderTest, V: CochainComplex, n: int, i: int) -> tuple[int, int]:
    """Both sides of ``DD(F, V) = sum_j DD(F, k)[n + j] (x) H_j V``."""
    lhs = dd_groups(F, V, n, i)
    rhs = 0
    for c, h in V.betti().items():
        j = -c
        if F.kind != "constant":
            rhs += h * nerve_pi_square_zero(F.L, dual_numbers(n + j), i)
    return lhs, rhs


@dataclass
class TangentReport:
    functor: str
    tangent: dict
    dd: dict = field(default_factory=dict)

    def lines(self) -> list[str]:
        out = [f"functor {self.functor}"]
        out += [f"dim F(k[eps_{n}]) = {d}" for n, d in sorted(self.tangent.items())]
        out += [f"DD[{k}] = {v}" for k, v in sorted(self.dd.items())]
        return out


def _direct_sum(V: CochainComplex, W: CochainComplex) -> CochainComplex:
    degs = sorted(set(V.degrees) | set(W.degrees))
    space = GradedSpace({n: list(V.space.labels(n)) + [x + "'" for x in W.space.labels(n)]
                         for n in degs})
    diff = {n: RatMatrix.block([[V.d(n), RatMatrix(V.dim(n + 1), W.dim(n))],
                                [RatMatrix(W.dim(n + 1), V.dim(n)), W.d(n)]]) for n in degs}
    return CochainComplex(space, diff)


def tangent_report(F: FunctorUnderTest, degrees=range(0, 5), complexes=(),
                   levels=((0, 0), (0, 1), (1, 0), (1, 1))) -> TangentReport:
    """Tangent dimensions plus DD groups; additivity over direct sums is asserted."""
    rep = TangentReport(F.name, {n: tangent_of_functor(F, n) for n in degrees})
    for a, V in enumerate(complexes):
        for n, i in levels:
            lhs, rhs = dd_splitting(F, V, n, i)
            if lhs != rhs:
                raise ValidationError(f"DD splitting fails for complex {a} at ({n}, {i})")
            rep.dd[(a, n, i)] = lhs
        for b, W in enumerate(complexes):
            for n, i in levels:
                s = dd_groups(F, _direct_sum(V, W), n, i)
                if s != dd_groups(F, V, n, i) + dd_groups(F, W, n, i):
                    raise ValidationError("DD groups are not additive")
    return rep


# gluing -------------------------------------------------------------------------------

def glue_mc(omega_A, omega_C, P: ArtinCdga, host_P: NilpotentDGLA, cls=MCElement):
    """Element over ``A x_B C`` with the given projections (assumed to match over B)."""
    NA, NC = omega_A.host, omega_C.host
    per_p: dict = {}
    for k, c in omega_A.coeffs.items():
        p, a = NA.pairs[k]
        per_p.setdefault(p, ({}, {}))[0][a] = c
    for k, c in omega_C.coeffs.items():
        p, a = NC.pairs[k]
        per_p.setdefault(p, ({}, {}))[1][a] = c
    out: dict = {}
    for p, (av, cv) in per_p.items():
        for q, c in P.fiber_coords(av, cv).items():
            add_into(out, {host_P.pair_index[(p, q)]: c})
    return cls(host_P, out)


def split_mc(omega_P, pa: CdgaMap, pc: CdgaMap, host_A: NilpotentDGLA, host_C: NilpotentDGLA):
    return pushforward(omega_P, pa, host_A), pushforward(omega_P, pc, host_C)


# batteries ------------------------------------------------------------------------------

@dataclass
class Cospan:
    name: str
    f: CdgaMap  # A -> B, surjective
    g: CdgaMap  # C -> B
    _fp: tuple | None = field(default=None, repr=False)

    @property
    def fiber(self):
        if self._fp is None:
            self._fp = fiber_product(self.f, self.g)
        return self._fp

    @property
    def square_zero(self) -> bool:
        return not (self.f.source.product or self.f.target.product or self.g.source.product)


@dataclass
class Extension:
    name: str
    e: CdgaMap


@dataclass
class Battery:
    name: str
    cospans: list
    acyclic: list
    small: list
    seed: int = 1729


def _poly_map(src: ArtinCdga, tgt: ArtinCdga, var="t") -> CdgaMap:
    """``t^k -> t^k`` (zero when it dies in the target)."""
    images = []
    for lab in src.labels:
        images.append({lab: 1} if lab in tgt.labels else {})
    return CdgaMap(src, tgt, {lab: im for lab, im in zip(src.labels, images)})


def standard_battery() -> Battery:
    """Objects ``k, k[eps_0], k[eps_1], k[t]/t^3, k[t]/t^4``, their cone
    extensions and fibre products of dual numbers."""
    E0, E1 = dual_numbers(0), dual_numbers(1)
    T2, T3, T4 = truncated_polynomial(2), truncated_polynomial(3), truncated_polynomial(4)
    t3t2, t4t2, t4t3 = _poly_map(T3, T2), _poly_map(T4, T2), _poly_map(T4, T3)
    e0k, e1k, t3k = augmentation(E0), augmentation(E1), augmentation(T3)
    P0, p1, _ = fiber_product(e0k, augmentation(E0))
    t3e0 = CdgaMap(T3, E0, {"t": {"eps": 1}})
    ident_e0 = CdgaMap(E0, E0, {"eps": {"eps": 1}})
    cospans = [
        Cospan("t3->t2<-t3", t3t2, t3t2),
        Cospan("t4->t2<-t3", t4t2, t3t2),
        Cospan("e0->k<-e1", e0k, e1k),
        Cospan("t3->k<-e0", t3k, e0k),
        Cospan("e0xe0->e0<-t3", p1, t3e0),
        Cospan("e0xe0->e0<-e0", p1, ident_e0),
    ]
    small = [Extension("t3->t2", t3t2), Extension("t4->t3", t4t3), Extension("e0->k", e0k),
             Extension("e1->k", e1k), Extension("e0xe0->e0", p1)]
    acyclic = [Extension(f"cone({s.name})", cone_extension(s.e).phi)
               for s in small if s.name in ("e0->k", "e1->k", "t3->t2", "t4->t3")]
    return Battery("standard", cospans, acyclic, small)


@dataclass
class BatteryItem:
    axiom: str
    diagram: str
    status: str  # pass | fail | n/a
    detail: str = ""


@dataclass
class BatteryReport:
    functor: str
    battery: str
    seed: int
    items: list
    verdict: str

    def lines(self) -> list[str]:
        out = [f"functor: {self.functor}", f"battery: {self.battery} (seed {self.seed})"]
        for it in self.items:
            out.append(f"[{it.status}] {it.axiom} on {it.diagram}: {it.detail}")
        out.append(f"verdict: {self.verdict}")
        return out

    def text(self) -> str:
        return "\n".join(self.lines()) + "\n"

    def to_dict(self) -> dict:
        return {"functor": self.functor, "battery": self.battery, "seed": self.seed,
                "items": [vars(it) for it in self.items], "verdict": self.verdict}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def failures(self, axiom: str | None = None) -> list:
        return [it for it in self.items if it.status == "fail" and (axiom is None or it.axiom == axiom)]


def _lin_map(F: FunctorUnderTest, e: CdgaMap) -> RatMatrix:
    NA, NB = F.host(e.source), F.host(e.target)
    f = induced_map(None, e, NA, NB, check=False)
    src, tgt = NA.indices_in_degree(1), NB.indices_in_degree(1)
    pos = {i: r for r, i in enumerate(tgt)}
    m = RatMatrix(len(tgt), len(src))
    for c, i in enumerate(src):
        for j, v in f.apply({i: 1}).items():
            m._set(pos[j], c, v)
    return m


def _induced_ranks(F: FunctorUnderTest, e: CdgaMap, diagram: str):
    """``(dim source, dim target, rank)`` of ``F(e)`` on square-zero presentations."""
    _, ZA, BA = F.presentation(e.source, diagram)
    _, ZB, BB = F.presentation(e.target, diagram)
    M = _lin_map(F, e)
    img = M @ ZA
    r_img = rank(RatMatrix.block([[img, BB]])) - rank(BB)
    return ZA.shape[1] - rank(BA), ZB.shape[1] - rank(BB), r_img


def _glue_pair(F, cs: Cospan, rng, gauge: bool):
    """Sample a matching pair and glue it; returns ``(status, note)``."""
    L = F.L
    (A, B, C) = cs.f.source, cs.f.target, cs.g.source
    NA, NB, NC = F.host(A), F.host(B), F.host(C)
    P, pa, pc = cs.fiber
    NP = F.host(P)
    omega_C = sample_mc(L, C, rng, host=NC)
    omega_B = pushforward(omega_C, cs.g, NB)
    target = gauge_act(sample_gauge(NB, rng), omega_B) if gauge else omega_B
    omega_A = lift_along_surjection(target, cs.f, L, host_A=NA, rng=rng)
    if omega_A is None:  # random torsor terms can create obstructions later on
        omega_A = lift_along_surjection(target, cs.f, L, host_A=NA)
    if omega_A is None:
        return "skip", "sampled image not liftable"
    if gauge:
        x_B = gauge_equivalence_witness(pushforward(omega_A, cs.f, NB), omega_B)
        if x_B is None:
            return "fail", "no gauge witness over B"
        omega_A = gauge_act(lift_gauge(x_B, cs.f, NA), omega_A)
    if pushforward(omega_A, cs.f, NB) != omega_B:
        return "fail", "pair does not match over B"  # pragma: no cover
    omega_P = glue_mc(omega_A, omega_C, P, NP)
    a2, c2 = split_mc(omega_P, pa, pc, NA, NC)
    if not omega_P.is_mc() or a2 != omega_A or c2 != omega_C:
        return "fail", "glued element does not project back"
    return "ok", ""


def _verdict(items) -> str:
    pre = all(it.status != "fail" for it in items if it.axiom != "axiom 4")
    full = pre and all(it.status != "fail" for it in items if it.axiom == "axiom 4")
    if full:
        return "deformation functor"
    if pre:
        return "pre-deformation functor"
    return "fails the pre-deformation axioms"


def manetti_battery(F: FunctorUnderTest, battery: Battery | None = None,
                    samples: int = 3) -> BatteryReport:
    """Axioms: (1) gluing along a surjection is onto, (2) bijective over
    ``k``, (3) ``F(k)`` is a point, (4) acyclic small extensions induce
    bijections (onto by acyclic lifting; into on square-zero presentations)."""
    battery = battery or standard_battery()
    rng = random.Random(battery.seed)
    items: list[BatteryItem] = []
    pt = F.at_point()
    items.append(BatteryItem("axiom 3", "k", "pass" if pt == 1 else "fail", f"|F(k)| = {pt}"))
    if F.kind == "constant":
        for cs in battery.cospans:
            items.append(BatteryItem("axiom 1", cs.name, "pass", "constant"))
        for ex in battery.acyclic:
            items.append(BatteryItem("axiom 4", ex.name, "pass", "constant"))
        return BatteryReport(F.name, battery.name, battery.seed, items, _verdict(items))
    L = F.L
    for cs in battery.cospans:
        gauge = F.uses_gauge(cs.name)
        glued, failed, notes = 0, 0, []
        for _ in range(samples):
            st, note = _glue_pair(F, cs, rng, gauge)
            if st == "ok":
                glued += 1
            elif st == "fail":
                failed += 1
                notes.append(note)
        status = "fail" if failed else "pass"
        items.append(BatteryItem("axiom 1", cs.name, status,
                                 f"{glued}/{samples} sampled pairs glued" + (f"; {notes[0]}" if notes else "")))
        if cs.f.target.dim == 0:
            items.append(_bijective_over_point(F, cs, rng, samples, gauge))
    for ex in battery.acyclic:
        e = ex.e
        NA, NB = F.host(e.source), F.host(e.target)
        ok = 0
        for _ in range(samples):
            wB = sample_mc(L, e.target, rng, host=NB)
            wA = acyclic_lift(wB, e, L, host_A=NA)
            ok += pushforward(wA, e, NB) == wB
        status, detail = ("pass" if ok == samples else "fail"), f"{ok}/{samples} sampled lifts"
        if not e.source.product:
            dA, dB, r = _induced_ranks(F, e, ex.name)
            what = "classes" if F.uses_gauge(ex.name) else "elements"
            if r != dA:
                status = "fail"
                detail += f"; not injective on {what} (dim {dA} -> rank {r})"
            else:
                detail += f"; injective on {what} (dim {dA})"
        else:
            detail += "; injectivity not checked (coefficients not square-zero)"
        items.append(BatteryItem("axiom 4", ex.name, status, detail))
    return BatteryReport(F.name, battery.name, battery.seed, items, _verdict(items))


def _bijective_over_point(F, cs: Cospan, rng, samples: int, gauge: bool) -> BatteryItem:
    L = F.L
    A, C = cs.f.source, cs.g.source
    NA, NC = F.host(A), F.host(C)
    P, pa, pc = cs.fiber
    NP = F.host(P)
    for _ in range(samples):
        wP = sample_mc(L, P, rng, host=NP)
        a, c = split_mc(wP, pa, pc, NA, NC)
        if glue_mc(a, c, P, NP) != wP:
            return BatteryItem("axiom 2", cs.name, "fail", "split then glue is not the identity")
        a, c = sample_mc(L, A, rng, host=NA), sample_mc(L, C, rng, host=NC)
        if split_mc(glue_mc(a, c, P, NP), pa, pc, NA, NC) != (a, c):
            return BatteryItem("axiom 2", cs.name, "fail", "glue then split is not the identity")
        if gauge:
            x = sample_gauge(NP, rng)
            wP2 = gauge_act(x, wP)
            a2, c2 = split_mc(wP2, pa, pc, NA, NC)
            a1, c1 = split_mc(wP, pa, pc, NA, NC)
            xa, xc = gauge_equivalence_witness(a1, a2), gauge_equivalence_witness(c1, c2)
            if xa is None or xc is None:
                return BatteryItem("axiom 2", cs.name, "fail", "no gauge witness on a factor")
            xP = glue_mc(xa, xc, P, NP, cls=GaugeElement)
            if gauge_act(xP, wP) != wP2:
                return BatteryItem("axiom 2", cs.name, "fail", "glued gauge witness fails")
    what = "with glued gauge witnesses" if gauge else "on elements"
    return BatteryItem("axiom 2", cs.name, "pass", f"{samples} roundtrips both ways {what}")


def _cone_acyclic(F, e: CdgaMap) -> bool:
    NA, NB = F.host(e.source), F.host(e.target)
    f = induced_map(None, e, NA, NB, check=False)
    X, Y = NA.complex(validate=False), NB.complex(validate=False)
    maps = {}
    for n in X.degrees:
        src, tgt = NA.indices_in_degree(n), NB.indices_in_degree(n)
        pos = {i: r for r, i in enumerate(tgt)}
        m = RatMatrix(len(tgt), len(src))
        for c, i in enumerate(src):
            for j, v in f.apply({i: 1}).items():
                m._set(pos[j], c, v)
        maps[n] = m
    return cone(ChainMap(X, Y, maps)).is_acyclic()


def schlessinger_homotopy_battery(F: FunctorUnderTest, battery: Battery | None = None,
                                  samples: int = 3) -> BatteryReport:
    """Homotopy conditions on square-zero models plus the obstruction sequence."""
    battery = battery or standard_battery()
    rng = random.Random(battery.seed)
    items: list[BatteryItem] = []
    const = F.kind == "constant"
    items.append(BatteryItem("contractible at k", "k", "pass" if F.at_point() == 1 else "fail",
                             "nerve over k is a point"))
    for ex in battery.acyclic:
        ok = const or _cone_acyclic(F, ex.e)
        items.append(BatteryItem("acyclic extension to weak equivalence", ex.name,
                                 "pass" if ok else "fail",
                                 "cone of the induced map is acyclic" if ok else "induced map is not a quasi-isomorphism"))
    for cs in battery.cospans:
        if not cs.square_zero:
            continue
        if const:
            items.append(BatteryItem("homotopy pullback", cs.name, "pass", "constant"))
            continue
        items.append(_pullback_item(F, cs))
    for ex in battery.small:
        if const:
            items.append(BatteryItem("obstruction sequence", ex.name, "pass", "constant"))
            continue
        items.append(_obstruction_item(F, ex, rng, samples))
    verdict = "pass" if all(it.status != "fail" for it in items) else "fail"
    return BatteryReport(F.name, battery.name, battery.seed, items, verdict)


def _degree_matrix(f, NS, NT, n):
    src, tgt = NS.indices_in_degree(n), NT.indices_in_degree(n)
    pos = {i: r for r, i in enumerate(tgt)}
    m = RatMatrix(len(tgt), len(src))
    for c, i in enumerate(src):
        for j, v in f.apply({i: 1}).items():
            m._set(pos[j], c, v)
    return m


def _pullback_item(F, cs: Cospan) -> BatteryItem:
    """``0 -> X_P -> X_A (+) X_C -> X_B -> 0`` is exact in every degree, so
    ``X_P`` is the homotopy fibre product; pi_0 and pi_1 dims are reported."""
    P, pa, pc = cs.fiber
    NA, NB, NC, NP = (F.host(X) for X in (cs.f.source, cs.f.target, cs.g.source, P))
    maps = [induced_map(None, m, s, t, check=False) for m, s, t in
            ((pa, NP, NA), (pc, NP, NC), (cs.f, NA, NB), (cs.g, NC, NB))]
    degs = sorted(set(NP.cdeg) | set(NA.cdeg) | set(NB.cdeg) | set(NC.cdeg))
    for n in degs:
        iA, iC, fA, gC = (_degree_matrix(m, s, t, n) for m, s, t in
                          zip(maps, (NP, NP, NA, NC), (NA, NC, NB, NB)))
        inc = RatMatrix.block([[iA], [iC]])
        diff = RatMatrix.block([[fA, gC.scale(-1)]])
        dP = len(NP.indices_in_degree(n))
        dAC = inc.shape[0]
        dB = len(NB.indices_in_degree(n))
        if rank(inc) != dP or rank(diff) != dB or rank(diff) + dP != dAC:
            return BatteryItem("homotopy pullback", cs.name, "fail", f"not exact in degree {n}")
    pis = {nm: (nerve_pi_square_zero(F.L, X, 0), nerve_pi_square_zero(F.L, X, 1))
           for nm, X in (("P", P), ("A", cs.f.source), ("C", cs.g.source), ("B", cs.f.target))}
    desc = ", ".join(f"{k}:{v[0]},{v[1]}" for k, v in pis.items())
    return BatteryItem("homotopy pullback", cs.name, "pass", f"short exact; (pi0,pi1) {desc}")


def _obstruction_item(F, ex: Extension, rng, samples: int) -> BatteryItem:
    e = ex.e
    L = F.L
    NA, NB = F.host(e.source), F.host(e.target)
    if not e.source.product:
        # linear case: image of F(A) in F(B) equals the kernel of o_e
        _, ZA, BA = F.presentation(e.source, "classes")
        _, ZB, BB = F.presentation(e.target, "classes")
        M = _lin_map(F, e)
        img = rank(RatMatrix.block([[M @ ZA, BB]]))
        tgt = NB.indices_in_degree(1)
        obs_cols = []
        for col in ZB.columns():
            w = MCElement(NB, {tgt[r]: c for r, c in enumerate(col) if c})
            obs_cols.append(lift_across_small_extension(w, e, L, host_A=NA,
                                                        check_affine=False).obstruction.coordinates)
        ker_o = ZB.shape[1] - (rank(RatMatrix.from_columns(obs_cols, rows=len(obs_cols[0])))
                               if obs_cols and obs_cols[0] else 0)
        ok = img == ker_o
        return BatteryItem("obstruction sequence", ex.name, "pass" if ok else "fail",
                           f"image rank {img} vs kernel of o_e {ker_o} (on cocycles mod boundaries)")
    checked = 0
    for s in range(samples + 1):
        wB = sample_mc(L, e.target, rng, host=NB) if s else _first_order(L, NB)
        res = lift_across_small_extension(wB, e, L, host_A=NA)
        via_cone = obstruction_via_cone(wB, e, L)
        if res.obstructed != bool(res.obstruction) or not via_cone.same_class(res.obstruction):
            return BatteryItem("obstruction sequence", ex.name, "fail",
                               "liftability and obstruction disagree")
        checked += 1
    return BatteryItem("obstruction sequence", ex.name, "pass",
                       f"{checked} elements: liftable exactly when o_e = 0, both routes agree")


def _first_order(L: DGLA, N: NilpotentDGLA) -> MCElement:
    """A fixed test element: the first degree-1 cocycle of ``L`` times the lowest
    weight basis vector of ``m(A)`` of chain degree 0, when that is MC."""
    z = L.cocycles(1)
    A = N.A
    zero_deg = [a for a in range(A.dim) if A.cdeg[a] == 0]
    if z and zero_deg:
        w = MCElement(N, N.tensor(z[0], {zero_deg[0]: 1}))
        if w.is_mc():
            return w
    return MCElement(N, {})
