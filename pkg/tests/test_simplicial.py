import random
from math import comb

import pytest

from mcdeform.artin import dual_numbers, truncated_polynomial
from mcdeform.complexes import CochainComplex, GradedSpace
from mcdeform.dgla import coefficient_extension
from mcdeform.errors import DimensionError, HostMismatchError, ValidationError
from mcdeform.mcgauge import GaugeElement, MCElement, gauge_act, sample_gauge, sample_mc
from mcdeform.simplicial import (BigradedArtin, BigradedMap, NerveCell, denormalize,
                                 denormalize_map, gauge_one_simplex, mc_check_on_simplex,
                                 nerve_pi_square_zero, surjections, tot_bigraded_artin,
                                 tot_bigraded_map)
from mcdeform.zoo import named


def sample_bigraded():
    return BigradedArtin(
        ["q", "p", "a", "b", "c", "r"],
        [(0, 0), (0, 1), (1, 0), (1, 0), (2, 0), (1, 1)],
        mult={("a", "b"): {"c": 1}, ("b", "a"): {"c": -1}},
        delta={"p": {"r": 1}},
        partial={"p": {"q": 1}},
        name="sample")


@pytest.mark.parametrize("name", ["End(k2 -> k2)", "Lobs", "Der(Lambda y)", "End(k + k[-1])"])
def test_gauge_one_simplices(name):
    L = named(name)
    rng = random.Random(41)
    for A in (truncated_polynomial(3), dual_numbers(1)):
        N = coefficient_extension(L, A)
        for _ in range(5):
            w = sample_mc(L, A, rng, host=N)
            x = sample_gauge(N, rng)
            cell = gauge_one_simplex(w, x)
            assert mc_check_on_simplex(cell)
            assert cell.vertex(0) == w
            assert cell.vertex(1) == gauge_act(x, w)
            assert cell.face(1) == NerveCell.constant(w)
            for i in (0, 1):
                assert cell.degeneracy(i).is_mc()
                assert cell.degeneracy(i).face(i) == cell


def test_constant_cells():
    L = named("Lobs")
    N = coefficient_extension(L, truncated_polynomial(3))
    good = MCElement(N, N.element({("u", "t^2"): 1}))
    bad = MCElement(N, N.element({("u", "t"): 1}))
    assert NerveCell.constant(good, 2).is_mc()
    assert not NerveCell.constant(bad, 2).is_mc()


def test_cell_degree_check():
    L = named("Lobs")
    N = coefficient_extension(L, truncated_polynomial(2))
    k = N.pair_index[(L.labels.index("v"), N.A.labels.index("t"))]
    with pytest.raises(DimensionError):
        NerveCell(N, 1, {(k, ((0,), ())): 1})


def test_gauge_one_simplex_host_check():
    L = named("End(k2 -> k2)")
    A = truncated_polynomial(2)
    N1, N2 = coefficient_extension(L, A), coefficient_extension(L, A)
    with pytest.raises(HostMismatchError):
        gauge_one_simplex(MCElement(N1, {}), GaugeElement(N2, {}))


def test_nerve_homotopy_square_zero():
    eps0 = CochainComplex(GradedSpace({0: ["e"]}))
    eps1 = CochainComplex(GradedSpace({-1: ["e"]}))
    assert nerve_pi_square_zero(named("Labh1"), eps0, 0) == 1
    assert nerve_pi_square_zero(named("Labh1"), eps0, 1) == 0
    assert nerve_pi_square_zero(named("Labh0"), eps0, 1) == 1
    assert nerve_pi_square_zero(named("Labh1"), eps1, 1) == 1
    assert nerve_pi_square_zero(named("Labh2"), eps1, 0) == 1
    with pytest.raises(ValueError):
        nerve_pi_square_zero(named("Labh1"), eps0, -1)


def test_bigraded_validation():
    B = sample_bigraded()
    assert B.validate()
    with pytest.raises(ValidationError):
        BigradedArtin(["x", "y"], [(0, 1), (0, 1)], delta={"x": {"y": 1}})
    with pytest.raises(ValidationError):
        BigradedArtin(["x", "y"], [(1, 0), (2, 0)], mult={("x", "x"): {"y": 1}})
    with pytest.raises(ValidationError):
        # delta and partial fail to commute
        BigradedArtin(["p", "q", "a"], [(0, 1), (0, 0), (1, 0)],
                      delta={"q": {"a": 1}}, partial={"p": {"q": 1}})


def test_tot_of_bigraded():
    T = tot_bigraded_artin(sample_bigraded())
    assert T.validate()
    assert dict(zip(T.labels, T.chain_degrees)) == {"q": 0, "p": 1, "a": -1, "b": -1,
                                                    "c": -2, "r": 0}


def test_surjection_counts():
    for n in range(5):
        for k in range(n + 1):
            assert len(surjections(n, k)) == comb(n, k)


def test_denormalization_levels():
    B = sample_bigraded()
    D = denormalize(B)
    slices = {i: len(B.slice(i)) for i in range(3)}
    for n in range(4):
        expect = sum(comb(n, k) * slices[k] for k in range(min(n, 2) + 1))
        assert D.level(n).dim == expect
        assert D.level(n).validate()
    assert D.check_identities(3)


def test_shuffle_product_is_graded_commutative():
    D = denormalize(sample_bigraded())
    lvl = D.level(3)
    rng = random.Random(5)
    basis = D.basis(3)
    for _ in range(30):
        x, y = rng.choice(basis), rng.choice(basis)
        xy, yx = D.shuffle(3, {x: 1}, {y: 1}), D.shuffle(3, {y: 1}, {x: 1})
        i, j = basis.index(x), basis.index(y)
        s = -1 if (lvl.chain_degrees[i] * lvl.chain_degrees[j]) % 2 else 1
        assert xy == {k: s * c for k, c in yx.items()}


def test_denormalized_map_commutes_with_structure():
    B = sample_bigraded()
    C = BigradedArtin(["a", "b", "c"], [(1, 0), (1, 0), (2, 0)],
                      mult={("a", "b"): {"c": 1}, ("b", "a"): {"c": -1}})
    f = BigradedMap(B, C, {"a": {"a": 1}, "b": {"b": 1}, "c": {"c": 1}})
    tot_bigraded_map(f)
    DB, DC = denormalize(B), denormalize(C)
    for n in range(3):
        fn, fn1 = denormalize_map(f, DB, DC, n), denormalize_map(f, DB, DC, n + 1)
        for i in range(n + 2):
            lhs = DC.coface(n + 1, i).compose(fn)
            rhs = fn1.compose(DB.coface(n + 1, i))
            assert lhs.matrix == rhs.matrix
