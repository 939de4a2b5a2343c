"""Maurer-Cartan elements, the gauge group and obstructions to lifting.

Elements of ``N = Tot(L (x) m(A))`` are sparse vectors over the basis of
``N``.  The gauge action ``g * w = g w g^-1 - (dg) g^-1`` with ``g = exp(x)``
is evaluated in :class:`TruncatedUEA` and cross-checked against the adjoint
series.  Obstructions across a small extension ``A -> B`` with kernel ``I``
are classes in ``H^2(Tot(L (x) I))``; they are computed directly from the
curvature of a linear lift, and independently through the cone extension.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

from .artin import (ArtinCdga, CdgaMap, classify_surjection, cone_extension,
                    augmentation, square_zero, subideal)
from .complexes import CochainComplex, contracting_homotopy
from .dgla import DGLA, NilpotentDGLA, coefficient_extension, induced_map
from .errors import HostMismatchError, ValidationError
from .qlinalg import Echelon, RatMatrix, solve
from .sparse import add_into, scaled
from .uea import TruncatedUEA

__all__ = [
    "MCElement",
    "GaugeElement",
    "ObstructionClass",
    "LiftResult",
    "mc_residual",
    "is_mc",
    "mc_solutions_square_zero",
    "def_classes_square_zero",
    "gauge_multiply",
    "gauge_inverse",
    "gauge_act",
    "gauge_act_series",
    "lift_across_small_extension",
    "acyclic_lift",
    "obstruction_via_cone",
    "gauge_equivalence_witness",
    "pushforward",
    "sample_mc",
    "sample_gauge",
    "extension_kernel",
    "lift_along_surjection",
    "lift_gauge",
]


def _uea(host: NilpotentDGLA) -> TruncatedUEA:
    u = getattr(host, "_uea", None)
    if u is None:
        u = TruncatedUEA(host)
        host._uea = u
    return u


def _check_degree(host, vec, n, what):
    for i in vec:
        if host.cdeg[i] != n:
            raise ValidationError(f"{what} must lie in degree {n}")


@dataclass
class MCElement:
    host: NilpotentDGLA
    coeffs: dict

    def __post_init__(self):
        self.coeffs = {int(k): Fraction(v) for k, v in self.coeffs.items() if v}
        _check_degree(self.host, self.coeffs, 1, "an MC candidate")

    def residual(self) -> dict:
        return mc_residual(self)

    def is_mc(self) -> bool:
        return not mc_residual(self)

    def __eq__(self, other):
        return isinstance(other, MCElement) and self.host is other.host and \
            self.coeffs == other.coeffs

    def __str__(self):
        return self.host.format_vector(self.coeffs)


@dataclass
class GaugeElement:
    """Gauge group element ``exp(x)`` stored through ``x`` in degree 0."""

    host: NilpotentDGLA
    coeffs: dict

    def __post_init__(self):
        self.coeffs = {int(k): Fraction(v) for k, v in self.coeffs.items() if v}
        _check_degree(self.host, self.coeffs, 0, "a gauge element")

    def __eq__(self, other):
        return isinstance(other, GaugeElement) and self.host is other.host and \
            self.coeffs == other.coeffs

    def __str__(self):
        return self.host.format_vector(self.coeffs)


def _same_host(a, b):
    if a.host is not b.host:
        raise HostMismatchError("elements live in different nilpotent DGLAs")


def mc_residual(omega: MCElement) -> dict:
    """``d w + 1/2 [w, w]``."""
    N = omega.host
    out = N.d(omega.coeffs)
    add_into(out, N.bracket(omega.coeffs, omega.coeffs), Fraction(1, 2))
    return out


def is_mc(omega: MCElement) -> bool:
    return not mc_residual(omega)


# square-zero coefficients ----------------------------------------------------------

def _square_zero_algebra(V) -> ArtinCdga:
    if isinstance(V, ArtinCdga):
        if V.product:
            raise ValidationError("coefficients are not square-zero; use lifting instead")
        return V
    if isinstance(V, CochainComplex):
        return square_zero(V)
    raise TypeError("expected a chain complex or a square-zero ArtinCdga")


def mc_solutions_square_zero(L: DGLA, V):
    """Basis of ``mc(L, k (+) V) = Z^1(Tot(L (x) V))``; returns ``(host, basis)``."""
    N = coefficient_extension(L, _square_zero_algebra(V), validate=False)
    return N, N.cocycles(1)


def def_classes_square_zero(L: DGLA, V):
    """``(dim, representatives)`` of ``H^1(Tot(L (x) V))``."""
    N = coefficient_extension(L, _square_zero_algebra(V), validate=False)
    return N.cohomology(1)


# gauge group -------------------------------------------------------------------

def gauge_multiply(x: GaugeElement, y: GaugeElement) -> GaugeElement:
    """``log(exp(x) exp(y))`` computed in the truncated enveloping algebra."""
    _same_host(x, y)
    u = _uea(x.host)
    g = u.mul(u.exp(u.embed(x.coeffs)), u.exp(u.embed(y.coeffs)))
    return GaugeElement(x.host, u.to_lie(u.log(g)))


def gauge_inverse(x: GaugeElement) -> GaugeElement:
    return GaugeElement(x.host, scaled(x.coeffs, -1))


def gauge_act(x: GaugeElement, omega: MCElement, cross_check: bool = True) -> MCElement:
    """``g w g^-1 - (dg) g^-1`` with ``g = exp(x)``."""
    _same_host(x, omega)
    u = _uea(x.host)
    X = u.embed(x.coeffs)
    g, ginv = u.exp(X), u.exp(scaled(X, -1))
    res = u.mul(u.mul(g, u.embed(omega.coeffs)), ginv)
    add_into(res, u.mul(u.d(g), ginv), -1)
    out = MCElement(x.host, u.to_lie(res))
    if cross_check:
        other = gauge_act_series(x, omega)
        if other.coeffs != out.coeffs:
            raise ValidationError("enveloping-algebra and adjoint-series actions disagree")
    return out


def gauge_act_series(x: GaugeElement, omega: MCElement) -> MCElement:
    """``e^{ad x} w - sum_n ad_x^n(dx) / (n+1)!``."""
    _same_host(x, omega)
    N = x.host
    out: dict = {}
    term = dict(omega.coeffs)
    n = 0
    while term:
        add_into(out, term, Fraction(1, factorial(n)))
        n += 1
        term = N.bracket(x.coeffs, term)
    term = N.d(x.coeffs)
    n = 0
    while term:
        add_into(out, term, -Fraction(1, factorial(n + 1)))
        n += 1
        term = N.bracket(x.coeffs, term)
    return MCElement(N, out)


# pushing forward along coefficient maps ----------------------------------------

def pushforward(omega, g: CdgaMap, target: NilpotentDGLA):
    """Image of an MC or gauge element under ``id (x) g``."""
    f = induced_map(None, g, omega.host, target, check=False)
    return type(omega)(target, f.apply(omega.coeffs))


def _host_for(L: DGLA, A: ArtinCdga, cache: dict | None = None) -> NilpotentDGLA:
    if cache is not None and id(A) in cache:
        return cache[id(A)]
    N = coefficient_extension(L, A, validate=False)
    if cache is not None:
        cache[id(A)] = N
    return N


# small extensions --------------------------------------------------------------

@dataclass
class ExtensionKernel:
    """``Tot(L (x) I)`` for the kernel ``I`` of a small extension, with its
    inclusion into ``Tot(L (x) m(A))``."""

    host_A: NilpotentDGLA
    ideal: ArtinCdga
    ideal_vectors: list
    host_I: NilpotentDGLA
    _ech: Echelon = field(repr=False, default=None)

    def include(self, vec) -> dict:
        out: dict = {}
        NA, NI = self.host_A, self.host_I
        for k, c in vec.items():
            p, i = NI.pairs[k]
            for a, ca in self.ideal_vectors[i].items():
                add_into(out, {NA.pair_index[(p, a)]: c * ca})
        return out

    def restrict(self, vec) -> dict:
        """Coordinates in ``Tot(L (x) I)`` of a vector known to lie there."""
        if self._ech is None:
            self._ech = Echelon(self.host_A.dim)
            for k in range(self.host_I.dim):
                self._ech.add(self.include({k: Fraction(1)}))
        rem, combo = self._ech.reduce(vec)
        if rem:
            raise ValidationError("vector does not lie in L (x) I")
        return combo


def extension_kernel(L: DGLA, e: CdgaMap, host_A: NilpotentDGLA | None = None):
    cls = classify_surjection(e)
    if not cls.is_small:
        raise ValidationError(f"expected a small extension, got {cls.kind}")
    vecs = cls.kernel_vectors
    A = e.source
    I = subideal(A, vecs, [A.labels[max(v)] for v in vecs])
    NA = host_A or coefficient_extension(L, A, validate=False)
    return ExtensionKernel(NA, I, vecs, coefficient_extension(L, I, validate=False)), cls


def _linear_lift(omega_B, e: CdgaMap, host_A: NilpotentDGLA) -> dict:
    sec = e.section()
    sec_images = [sec.apply_sparse({b: Fraction(1)}) for b in range(e.target.dim)]
    out: dict = {}
    NB = omega_B.host
    for k, c in omega_B.coeffs.items():
        p, b = NB.pairs[k]
        for a, ca in sec_images[b].items():
            add_into(out, {host_A.pair_index[(p, a)]: c * ca})
    return out


def _check_host(omega: MCElement, algebra: ArtinCdga):
    if not omega.host.A.same_as(algebra):
        raise HostMismatchError("MC element does not live over the target of the extension")


class ObstructionClass:
    """Class of a degree-2 cocycle of ``Tot(L (x) I)``.

    ``decomposition`` lists ``(m, i, j, c)``: coefficient ``c`` of
    ``z_i (x) h_j`` with ``z_i`` the ``i``-th representative of
    ``H^{m+2}(L)`` and ``h_j`` the ``j``-th of ``H_m(I)``.
    """

    def __init__(self, host_I: NilpotentDGLA, representative: dict):
        self.host = host_I
        self.representative = {k: Fraction(v) for k, v in representative.items() if v}
        if host_I.d(self.representative):
            raise ValidationError("obstruction representative is not a cocycle")
        N = host_I
        n1 = N.indices_in_degree(1)
        n2 = N.indices_in_degree(2)
        pos2 = {i: r for r, i in enumerate(n2)}
        dmat = N.differential_matrix(1)
        L, I = N.L, N.A
        Ic = I.complex(validate=False)
        columns, labels = [], []
        for n in sorted(set(L.cdeg)):
            m = n - 2
            hz = L.cohomology(n)[1]
            if not hz:
                continue
            dim_h, hreps = Ic.cohomology(-m)
            for i, z in enumerate(hz):
                for j, h in enumerate(hreps):
                    hv = I.from_degree_coords(h, -m)
                    col = [Fraction(0)] * len(n2)
                    for k, c in N.tensor(z, hv).items():
                        col[pos2[k]] += c
                    columns.append(col)
                    labels.append((m, i, j))
        self.basis_labels = labels
        rhs = [self.representative.get(i, Fraction(0)) for i in n2]
        full = RatMatrix.from_columns(columns + dmat.columns(), rows=len(n2))
        sol = solve(full, rhs)
        if sol is None:
            raise ValidationError("Kunneth decomposition failed")  # pragma: no cover
        self.decomposition = [(m, i, j, sol[k]) for k, (m, i, j) in enumerate(labels)
                              if sol[k]]
        self.coordinates = [sol[k] for k in range(len(labels))]
        self._n1 = n1

    def is_zero(self) -> bool:
        return not any(self.coordinates)

    def __bool__(self):
        return not self.is_zero()

    def same_class(self, other: ObstructionClass) -> bool:
        if not self.host.same_as(other.host):
            raise HostMismatchError("classes live in different complexes")
        return self.coordinates == other.coordinates

    def describe(self) -> str:
        if self.is_zero():
            return "0"
        L, I = self.host.L, self.host.A
        Ic = I.complex(validate=False)
        parts = []
        for m, i, j, c in self.decomposition:
            z = L.cohomology(m + 2)[1][i]
            h = I.from_degree_coords(Ic.cohomology(-m)[1][j], -m)
            parts.append(f"{c}*[{L.format_vector(z)}](x)[{I.format_vector(h)}]")
        return " + ".join(parts)


@dataclass
class LiftResult:
    lift: MCElement | None
    torsor_basis: list | None
    obstruction: ObstructionClass | None
    curvature: dict

    @property
    def obstructed(self) -> bool:
        return self.lift is None


def lift_across_small_extension(omega_B: MCElement, e: CdgaMap, L: DGLA | None = None,
                                host_A: NilpotentDGLA | None = None,
                                check_affine: bool = True, rng=None) -> LiftResult:
    """Lift an MC element over ``B`` to one over ``A`` or return the obstruction."""
    L = L or omega_B.host.L
    _check_host(omega_B, e.target)
    if not omega_B.is_mc():
        raise ValidationError("input is not a Maurer-Cartan element")
    ker, _ = extension_kernel(L, e, host_A)
    NA, NI = ker.host_A, ker.host_I
    wt = MCElement(NA, _linear_lift(omega_B, e, NA))
    kappa_A = mc_residual(wt)
    kappa = ker.restrict(kappa_A)
    if NI.d(kappa):
        raise ValidationError("curvature is not a cocycle")  # pragma: no cover
    if check_affine:
        # kappa(w + x) = kappa(w) + dx for x in L (x) I
        rng = rng or random.Random(0)
        one = NI.indices_in_degree(1)
        x = {i: Fraction(rng.randint(-3, 3)) for i in one}
        shifted = MCElement(NA, add_into(dict(wt.coeffs), ker.include(x)))
        expect = add_into(dict(kappa_A), ker.include(NI.d(x)))
        if add_into(mc_residual(shifted), expect, -1):
            raise ValidationError("curvature is not affine along L (x) I")  # pragma: no cover
    n1 = NI.indices_in_degree(1)
    n2 = NI.indices_in_degree(2)
    dmat = NI.differential_matrix(1)
    x = solve(dmat, [kappa.get(i, Fraction(0)) for i in n2]) if n2 else []
    if x is None:
        return LiftResult(None, None, ObstructionClass(NI, kappa), kappa)
    xvec = {n1[k]: c for k, c in enumerate(x) if c}
    lift = MCElement(NA, add_into(dict(wt.coeffs), ker.include(xvec), -1))
    if not lift.is_mc():
        raise ValidationError("lift is not Maurer-Cartan")  # pragma: no cover
    torsor = [ker.include(z) for z in NI.cocycles(1)]
    return LiftResult(lift, torsor, ObstructionClass(NI, kappa), kappa)


def acyclic_lift(omega_B: MCElement, e: CdgaMap, L: DGLA | None = None,
                 host_A: NilpotentDGLA | None = None) -> MCElement:
    """``w~ - h(kappa(w~))`` for an acyclic small extension."""
    L = L or omega_B.host.L
    _check_host(omega_B, e.target)
    if not omega_B.is_mc():
        raise ValidationError("input is not a Maurer-Cartan element")
    ker, cls = extension_kernel(L, e, host_A)
    if cls.kind != "acyclic-small":
        raise ValidationError("kernel is not acyclic")
    NA, NI = ker.host_A, ker.host_I
    wt = MCElement(NA, _linear_lift(omega_B, e, NA))
    kappa = ker.restrict(mc_residual(wt))
    h = contracting_homotopy(NI.complex(validate=False))
    n2 = NI.indices_in_degree(2)
    n1 = NI.indices_in_degree(1)
    x: dict = {}
    if 2 in h and n1:
        coords = h[2] @ [kappa.get(i, Fraction(0)) for i in n2]
        x = {n1[k]: c for k, c in enumerate(coords) if c}
    lift = MCElement(NA, add_into(dict(wt.coeffs), ker.include(x), -1))
    if not lift.is_mc():
        raise ValidationError("acyclic lift is not Maurer-Cartan")  # pragma: no cover
    return lift


def obstruction_via_cone(omega_B: MCElement, e: CdgaMap, L: DGLA | None = None):
    """Lift through ``phi: B~ -> B``, push along ``rho`` to ``k (+) I[1]``.

    The resulting degree-1 cocycle of ``Tot(L (x) I[1])`` is carried to
    ``Tot(L (x) I)`` by ``-theta``, ``theta(u (x) s i) = (-1)^{|u|} u (x) i``,
    which is an isomorphism of complexes up to the shift.
    """
    L = L or omega_B.host.L
    _check_host(omega_B, e.target)
    ce = cone_extension(e)
    lifted = acyclic_lift(omega_B, ce.phi, L)
    N_shift = coefficient_extension(L, ce.shifted, validate=False)
    pushed = pushforward(lifted, ce.rho, N_shift)
    ker, _ = extension_kernel(L, e)
    NI = ker.host_I
    # s-basis element k of the shifted algebra corresponds to ideal vector k
    rep: dict = {}
    for idx, c in pushed.coeffs.items():
        p, k = N_shift.pairs[idx]
        sign = -1 if L.parity(p) else 1
        add_into(rep, {NI.pair_index[(p, k)]: -sign * c})
    return ObstructionClass(NI, rep)


# gauge equivalence --------------------------------------------------------------

def gauge_equivalence_witness(omega: MCElement, omega2: MCElement, budget: int = 1):
    """Search for ``x`` with ``gauge_act(x, omega) = omega2``.

    Works along the filtration ``F^s = L (x) m(A)^s``.  At stage ``s`` the
    discrepancy ``delta = omega2 - x*omega`` lies in ``F^s``; a correction
    ``w`` of degree 0 in ``F^max(1, s-budget')`` (``budget' = min(budget, 1)``)
    is found by solving ``-dw + [w, eta] = delta mod F^{s+1}`` and ``x`` is
    replaced by ``BCH(w, x)``.  Every answer is verified; ``None`` means
    the search failed, which proves non-equivalence only for square-zero
    coefficients (single stage) and in the situations recorded in the docs.
    """
    _same_host(omega, omega2)
    N = omega.host
    r = N.nilpotency_index
    lookback = max(0, min(int(budget), 1))
    x = GaugeElement(N, {})
    zero_deg = N.indices_in_degree(0)
    one_deg = N.indices_in_degree(1)
    for s in range(1, r):
        eta = gauge_act(x, omega, cross_check=False)
        delta = add_into(dict(omega2.coeffs), eta.coeffs, -1)
        if not delta:
            break
        ech_next = N.filtration_echelon(s + 1)
        if not ech_next.reduce(delta)[0]:
            continue
        low = max(1, s - lookback)
        cands = [v for v in N.filtration(low) if all(i in zero_deg for i in v)]
        cols, pos = [], {i: k for k, i in enumerate(one_deg)}

        def reduced(vec):
            rem, _ = ech_next.reduce(vec)
            out = [Fraction(0)] * len(one_deg)
            for i, c in rem.items():
                out[pos[i]] = c
            return out

        for w in cands:
            img = N.bracket(w, eta.coeffs)
            add_into(img, N.d(w), -1)
            cols.append(reduced(img))
        if not cols:
            return None
        sol = solve(RatMatrix.from_columns(cols, rows=len(one_deg)), reduced(delta))
        if sol is None:
            return None
        w: dict = {}
        for c, v in zip(sol, cands):
            if c:
                add_into(w, v, c)
        x = gauge_multiply(GaugeElement(N, w), x)
    if gauge_act(x, omega, cross_check=False).coeffs != omega2.coeffs:
        return None
    return x


# sampling -----------------------------------------------------------------------

def _rand_q(rng, span=3) -> Fraction:
    return Fraction(rng.randint(-span, span), rng.choice((1, 1, 2, 3)))


def sample_gauge(N: NilpotentDGLA, rng) -> GaugeElement:
    return GaugeElement(N, {i: _rand_q(rng) for i in N.indices_in_degree(0)})


def sample_mc(L: DGLA, A: ArtinCdga, rng, attempts: int = 8, host: NilpotentDGLA | None = None):
    """Random MC element over ``A``: lift from ``k`` through a factorization of
    ``A -> k`` into small extensions, adding a random torsor element at each
    step.  Falls back to zero if every attempt is obstructed."""
    N = host or coefficient_extension(L, A, validate=False)
    aug = augmentation(A)
    cls = classify_surjection(aug)
    steps = cls.factorization if cls.kind == "surjective-composite" else [aug]
    steps = list(reversed(steps)) if cls.kind == "surjective-composite" else steps
    for _ in range(attempts):
        omega = MCElement(coefficient_extension(L, steps[0].target, validate=False), {})
        ok = True
        for k, e in enumerate(steps):
            target_host = N if k == len(steps) - 1 else None
            res = lift_across_small_extension(omega, e, L, host_A=target_host,
                                              check_affine=False)
            if res.obstructed:
                ok = False
                break
            coeffs = dict(res.lift.coeffs)
            for t in res.torsor_basis:
                add_into(coeffs, t, _rand_q(rng))
            omega = MCElement(res.lift.host, coeffs)
        if ok and omega.host is N and omega.is_mc():
            return omega
        if ok and omega.is_mc() and not steps:
            return omega
    return MCElement(N, {})


# arbitrary surjections ------------------------------------------------------------

def lift_gauge(x_B: GaugeElement, f: CdgaMap, host_A: NilpotentDGLA) -> GaugeElement:
    """A preimage of ``x_B`` under a surjection; gauge elements always lift."""
    _check_host(x_B, f.target)
    return GaugeElement(host_A, _linear_lift(x_B, f, host_A))


def lift_along_surjection(omega_B: MCElement, f: CdgaMap, L: DGLA | None = None,
                          host_A: NilpotentDGLA | None = None, rng=None):
    """Lift through the small-extension factorisation of ``f``.

    Returns an MC element over ``f.source`` or ``None`` if some stage is
    obstructed.  With ``rng`` a random torsor element is added at each stage.
    """
    L = L or omega_B.host.L
    _check_host(omega_B, f.target)
    cls = classify_surjection(f)
    if cls.kind == "not-surjective":
        raise ValidationError("map is not surjective")
    steps = [f] if cls.is_small else list(reversed(cls.factorization))
    omega = omega_B
    for k, e in enumerate(steps):
        target = host_A if k == len(steps) - 1 else None
        res = lift_across_small_extension(omega, e, L, host_A=target, check_affine=False)
        if res.obstructed:
            return None
        coeffs = dict(res.lift.coeffs)
        if rng is not None:
            for t in res.torsor_basis:
                add_into(coeffs, t, _rand_q(rng))
        omega = MCElement(res.lift.host, coeffs)
    if not omega.is_mc():
        raise ValidationError("lift is not Maurer-Cartan")  # pragma: no cover
    return omega
