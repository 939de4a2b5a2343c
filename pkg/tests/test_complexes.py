import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mcdeform.complexes import (Bicomplex, ChainMap, CochainComplex, GradedSpace, cohomology,
                                cone, contracting_homotopy, shift, tot_bicomplex)
from mcdeform.errors import ValidationError
from mcdeform.qlinalg import RatMatrix


def cx(labels, d=None):
    space = GradedSpace(labels)
    diff = {n: RatMatrix.from_columns(cols, rows=space.dim(n + 1)) for n, cols in (d or {}).items()}
    return CochainComplex(space, diff)


def test_zero_complex_has_no_cohomology():
    z = CochainComplex.zero()
    assert all(cohomology(z, n)[0] == 0 for n in range(-2, 3))


def test_identity_two_term_complex_is_exact():
    c = cx({0: ["a"], 1: ["b"]}, {0: [[1]]})
    assert c.cohomology(0)[0] == 0 and c.cohomology(1)[0] == 0


def test_zero_differential():
    c = cx({1: ["a"], 2: ["b", "c"]})
    assert c.cohomology(1)[0] == 1 and c.cohomology(2)[0] == 2


def test_d_squared_is_validated():
    with pytest.raises(ValidationError):
        cx({0: ["a"], 1: ["b"], 2: ["c"]}, {0: [[1]], 1: [[1]]})


def test_shift_conventions():
    c = cx({1: ["a"]})
    assert shift(c, 0).space.dims() == c.space.dims()
    assert shift(c, 1).space.dims() == {0: 1}
    d = cx({0: ["a"], 1: ["b"]}, {0: [[2]]})
    assert shift(d, 1).d(-1) == d.d(0).scale(-1)
    assert shift(d, 2).d(-2) == d.d(0)


def test_cone_of_identity_is_acyclic():
    c = cx({0: ["a"]})
    assert cone(ChainMap(c, c, {0: RatMatrix.identity(1)})).is_acyclic()


def test_cone_of_zero_source_is_target():
    z, q = CochainComplex.zero(), cx({0: ["a"]})
    assert cone(ChainMap(z, q, {})).betti() == {0: 1}


def test_cone_of_rank_one_inclusion():
    x, y = cx({0: ["a"]}), cx({0: ["b", "c"]})
    inc = ChainMap(x, y, {0: RatMatrix.from_columns([[1, 0]], rows=2)})
    assert sum(cone(inc).betti().values()) == 1


def test_cone_rejects_non_chain_map():
    x = cx({0: ["a"], 1: ["b"]}, {0: [[1]]})
    y = cx({0: ["c"], 1: ["d"]})
    with pytest.raises(ValidationError):
        ChainMap(x, y, {1: RatMatrix.identity(1)})


def _random_complex(rng, lo=-1, hi=2):
    """Random complex built from a random basis change of a direct sum of
    two-term pieces and single terms."""
    labels, diff = {}, {}
    for n in range(lo, hi + 1):
        labels[n] = [f"x{n}_{k}" for k in range(rng.randint(0, 2))]
    space = GradedSpace(labels)
    for n in range(lo, hi):
        a, b = space.dim(n), space.dim(n + 1)
        m = RatMatrix(b, a)
        # rank-one maps only between consecutive degrees keep d^2 = 0 easy
        if a and b and rng.random() < 0.7 and (n - 1 not in diff or diff[n - 1].is_zero()):
            m._set(0, 0, rng.choice([1, 2, -1]))
        diff[n] = m
    return CochainComplex(space, diff)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000))
def test_euler_characteristic(seed):
    c = _random_complex(random.Random(seed))
    chi = sum((-1) ** n * h for n, h in c.betti().items())
    assert chi == c.euler_characteristic()


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000))
def test_cone_acyclic_iff_quasi_isomorphism(seed):
    rng = random.Random(seed)
    c = _random_complex(rng)
    # identity and zero endomorphisms
    ident = ChainMap(c, c, {n: RatMatrix.identity(c.dim(n)) for n in c.degrees})
    assert cone(ident).is_acyclic()
    zero = ChainMap(c, c, {})
    assert cone(zero).is_acyclic() == (not c.betti())


def test_contracting_homotopy_on_acyclic_complex():
    c = cx({0: ["a", "b"], 1: ["c", "d"]}, {0: [[1, 1], [0, 1]]})
    h = contracting_homotopy(c)
    for n in c.degrees:
        tot = RatMatrix(c.dim(n), c.dim(n))
        if n in h:
            tot = tot + c.d(n - 1) @ h[n]
        if n + 1 in h:
            tot = tot + h[n + 1] @ c.d(n)
        assert tot == RatMatrix.identity(c.dim(n))


def test_tot_bidegree_one_one_sits_in_degree_zero():
    b = Bicomplex({(1, 1): ["x"]})
    assert tot_bicomplex(b).space.dims() == {0: 1}


def test_tot_bidegree_zero_j_is_chain_degree_j():
    b = Bicomplex({(0, 2): ["x"]})
    assert tot_bicomplex(b).space.dims() == {-2: 1}


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000))
def test_tot_d_squared_on_random_square(seed):
    """Commuting square B^0_1 -> B^1_1, B^0_0 -> B^1_0 with vertical maps."""
    rng = random.Random(seed)
    top, v_left = rng.randint(-3, 3), rng.randint(-3, 3)
    v_right = rng.choice([1, 2, -1])
    bottom = Fraction(top * v_right, 1) / v_left if v_left else 0
    if not v_left:
        top = 0 if v_right else top

    def one(x):
        return RatMatrix.from_columns([[x]], rows=1)
    bic = Bicomplex({(0, 0): ["p"], (1, 0): ["q"], (0, 1): ["r"], (1, 1): ["s"]},
                    {(0, 1): one(top), (0, 0): one(bottom)},
                    {(0, 1): one(v_left), (1, 1): one(v_right)})
    t = tot_bicomplex(bic)
    assert t.validate()
    assert t.space.dims() == {0: 2, 1: 1, -1: 1}
