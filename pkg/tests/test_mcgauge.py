import random

import pytest

from mcdeform.artin import (CdgaMap, cone_extension, dual_numbers, square_zero,
                            truncated_polynomial)
from mcdeform.complexes import CochainComplex, GradedSpace
from mcdeform.dgla import coefficient_extension
from mcdeform.errors import HostMismatchError, ValidationError
from mcdeform.mcgauge import (GaugeElement, MCElement, acyclic_lift, def_classes_square_zero,
                              gauge_act, gauge_equivalence_witness,
                              gauge_inverse, gauge_multiply, lift_across_small_extension,
                              lift_along_surjection, mc_residual, mc_solutions_square_zero,
                              obstruction_via_cone, pushforward, sample_gauge, sample_mc)
from mcdeform.zoo import named


def t_map(src, tgt):
    return CdgaMap(truncated_polynomial(src), truncated_polynomial(tgt), {"t": {"t": 1}})


def test_first_order_element_of_lobs(lobs):
    N2 = coefficient_extension(lobs, truncated_polynomial(2))
    assert MCElement(N2, N2.element({("u", "t"): 1})).is_mc()
    N3 = coefficient_extension(lobs, truncated_polynomial(3))
    w = MCElement(N3, N3.element({("u", "t"): 1}))
    assert mc_residual(w) == N3.element({("v", "t^2"): 1})


def test_lobs_obstruction_both_routes(lobs):
    e = t_map(3, 2)
    N2 = coefficient_extension(lobs, e.target)
    w = MCElement(N2, N2.element({("u", "t"): 1}))
    res = lift_across_small_extension(w, e, lobs)
    assert res.obstructed and not res.obstruction.is_zero()
    cone_class = obstruction_via_cone(w, e, lobs)
    assert cone_class.same_class(res.obstruction)


def test_unobstructed_lift_has_expected_torsor(heis, labh1):
    e = t_map(3, 2)
    N2 = coefficient_extension(labh1, e.target)
    w = MCElement(N2, N2.element({("w", "t"): 1}))
    res = lift_across_small_extension(w, e, labh1)
    assert not res.obstructed and res.lift.is_mc()
    assert len(res.torsor_basis) == 1
    assert res.obstruction.is_zero()


def test_square_zero_counts(lobs, labh1):
    V = CochainComplex(GradedSpace({0: ["e"]}))
    N, basis = mc_solutions_square_zero(lobs, V)
    assert len(basis) == 1
    assert def_classes_square_zero(labh1, V)[0] == 1
    assert def_classes_square_zero(lobs, square_zero(V))[0] == 1


def test_non_mc_input_rejected(lobs):
    N3 = coefficient_extension(lobs, truncated_polynomial(3))
    bad = MCElement(N3, N3.element({("u", "t"): 1}))
    with pytest.raises(ValidationError):
        lift_across_small_extension(bad, t_map(4, 3), lobs)


def test_degree_checks(lobs):
    N = coefficient_extension(lobs, truncated_polynomial(3))
    with pytest.raises(ValidationError):
        MCElement(N, N.element({("v", "t"): 1}))
    with pytest.raises(ValidationError):
        GaugeElement(N, N.element({("u", "t"): 1}))


def test_host_mismatch(labh1):
    A = truncated_polynomial(2)
    N1, N2 = coefficient_extension(labh1, A), coefficient_extension(labh1, A)
    with pytest.raises(HostMismatchError):
        gauge_act(GaugeElement(N1, {}), MCElement(N2, {}))


def test_abelian_gauge_action_is_translation():
    from mcdeform.dgla import abelian_dgla
    from mcdeform.qlinalg import RatMatrix
    V = CochainComplex(GradedSpace({0: ["a"], 1: ["b"]}), {0: RatMatrix.identity(1)})
    L = abelian_dgla(V)
    N = coefficient_extension(L, truncated_polynomial(3))
    rng = random.Random(3)
    for _ in range(10):
        x = sample_gauge(N, rng)
        w = sample_mc(L, N.A, rng, host=N)
        expect = dict(w.coeffs)
        for i, c in N.d(x.coeffs).items():
            expect[i] = expect.get(i, 0) - c
        assert gauge_act(x, w) == MCElement(N, expect)


@pytest.mark.parametrize("name", ["End(k2 -> k2)", "End(k + k[-1])", "Der(Lambda y)", "Lobs"])
def test_gauge_group_laws(name):
    L = named(name)
    rng = random.Random(11)
    for A in (truncated_polynomial(3), truncated_polynomial(4), dual_numbers(1)):
        N = coefficient_extension(L, A)
        for _ in range(6):
            w = sample_mc(L, A, rng, host=N)
            assert w.is_mc()
            x, y = sample_gauge(N, rng), sample_gauge(N, rng)
            xw = gauge_act(x, w)
            assert xw.is_mc()
            assert gauge_act(gauge_multiply(x, y), w) == gauge_act(x, gauge_act(y, w))
            assert gauge_act(gauge_inverse(x), xw) == w
            assert gauge_multiply(x, gauge_inverse(x)) == GaugeElement(N, {})


def test_witness_finds_gauge_equivalence():
    L = named("End(k2 -> k2)")
    rng = random.Random(7)
    A = truncated_polynomial(3)
    N = coefficient_extension(L, A)
    found = 0
    for _ in range(10):
        w = sample_mc(L, A, rng, host=N)
        x = sample_gauge(N, rng)
        wit = gauge_equivalence_witness(w, gauge_act(x, w))
        if wit is not None:
            assert gauge_act(wit, w) == gauge_act(x, w)
            found += 1
    assert found >= 8


def test_witness_rejects_inequivalent_square_zero(labh1):
    A = dual_numbers(0)
    N = coefficient_extension(labh1, A)
    w1 = MCElement(N, {})
    w2 = MCElement(N, N.element({("w", "eps"): 1}))
    assert gauge_equivalence_witness(w1, w2) is None


def test_pushforward_commutes_with_gauge():
    L = named("End(k2 -> k2)")
    rng = random.Random(2)
    g = t_map(4, 2)
    NA, NB = coefficient_extension(L, g.source), coefficient_extension(L, g.target)
    for _ in range(5):
        w = sample_mc(L, g.source, rng, host=NA)
        x = sample_gauge(NA, rng)
        lhs = pushforward(gauge_act(x, w), g, NB)
        rhs = gauge_act(pushforward(x, g, NB), pushforward(w, g, NB))
        assert lhs == rhs and lhs.is_mc()


def test_acyclic_lift_is_section(lobs):
    e = t_map(3, 2)
    ce = cone_extension(e)
    N2 = coefficient_extension(lobs, e.target)
    w = MCElement(N2, N2.element({("u", "t"): 1}))
    lifted = acyclic_lift(w, ce.phi, lobs)
    assert lifted.is_mc()
    assert pushforward(lifted, ce.phi, N2) == w


def test_lift_along_composite_surjection(heis):
    L = named("End(k2 -> k2)")
    rng = random.Random(4)
    f = t_map(4, 2)
    NB = coefficient_extension(L, f.target)
    for _ in range(5):
        w = sample_mc(L, f.target, rng, host=NB)
        up = lift_along_surjection(w, f, L, rng=rng)
        assert up is not None and up.is_mc()
        assert pushforward(up, f, NB) == w
