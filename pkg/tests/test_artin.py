import pytest

from mcdeform.artin import (ArtinCdga, CdgaMap, augmentation, classify_surjection,
                            cone_extension, dual_numbers, fiber_product, square_zero,
                            truncated_polynomial, unit_map)
from mcdeform.complexes import CochainComplex, GradedSpace
from mcdeform.errors import ValidationError
from mcdeform.qlinalg import RatMatrix


def t_map(src, tgt):
    return CdgaMap(src, tgt, {lab: ({lab: 1} if lab in tgt.labels else {}) for lab in src.labels})


def test_dual_numbers():
    e0, e1 = dual_numbers(0), dual_numbers(1)
    assert e0.dim == 1 and e0.chain_degrees == (0,) and e0.nilpotency_index == 2
    assert e1.chain_degrees == (1,)
    assert dual_numbers(5).validate()


def test_square_zero_constructions():
    assert square_zero(CochainComplex.zero()).dim == 0
    V = CochainComplex(GradedSpace({-2: ["e"]}))
    A = square_zero(V)
    assert A.chain_degrees == dual_numbers(2).chain_degrees and not A.product
    W = CochainComplex(GradedSpace({-1: ["a"], 0: ["b"]}), {-1: RatMatrix.identity(1)})
    B = square_zero(W)
    assert B.dim == 2 and B.maximal_ideal.is_acyclic()


def test_truncated_polynomials():
    t2, t3 = truncated_polynomial(2), truncated_polynomial(3)
    assert t2.dim == dual_numbers(0).dim and not t2.product
    assert t3.nilpotency_index == 3
    t, t2v = t3.vector({"t": 1}), t3.vector({"t^2": 1})
    assert t3.mul(t, t2v) == {}
    with pytest.raises(ValueError):
        truncated_polynomial(1)


def test_validator_rejects_non_commutative_tables():
    with pytest.raises(ValidationError):
        ArtinCdga(["a", "b", "c"], [0, 0, 0], {("a", "b"): {"c": 1}})


def test_validator_rejects_leibniz_failure():
    with pytest.raises(ValidationError):
        ArtinCdga(["x", "y", "z"], [1, 0, 1], {("y", "y"): {"z": 1}}, {"x": {"y": 1}})


def test_fiber_product_of_dual_numbers():
    e = dual_numbers(0)
    P, pa, pc = fiber_product(augmentation(e), augmentation(dual_numbers(0)))
    assert P.dim == 2 and not P.product and P.nilpotency_index == 2


def test_fiber_product_along_identities():
    A = truncated_polynomial(3)
    ident = t_map(A, A)
    P, pa, pc = fiber_product(ident, ident)
    assert P.dim == A.dim and pa.is_injective() and pa.is_surjective()


def test_fiber_product_with_base_field():
    C, B = truncated_polynomial(4), truncated_polynomial(2)
    P, _, pc = fiber_product(unit_map(B), t_map(C, B))
    assert P.dim == 2  # kernel of C -> B
    assert pc.is_injective()


def test_fiber_product_universal_property():
    A, C = truncated_polynomial(3), dual_numbers(0)
    P, pa, pc = fiber_product(augmentation(A), augmentation(C))
    # a cdga D with maps to A and C agreeing over B factors uniquely through P
    D = truncated_polynomial(3)
    to_a = t_map(D, A)
    to_c = CdgaMap(D, C, {"t": {"eps": 1}})
    images = [P.fiber_coords(to_a.images[i], to_c.images[i]) for i in range(D.dim)]
    u = CdgaMap(D, P, images)
    assert pa.compose(u) == to_a and pc.compose(u) == to_c


def test_classification_examples():
    t4, t3, t2 = truncated_polynomial(4), truncated_polynomial(3), truncated_polynomial(2)
    assert classify_surjection(t_map(t3, t2)).kind == "small"
    c = classify_surjection(t_map(t4, t2))
    assert c.kind == "surjective-composite" and len(c.factorization) == 2
    composite = c.factorization[1].compose(c.factorization[0])
    assert composite.matrix == t_map(t4, t2).matrix
    assert classify_surjection(CdgaMap(t2, t3, {"t": {"t^2": 1}})).kind == "not-surjective"


def test_identity_is_small_with_zero_kernel():
    A = truncated_polynomial(3)
    c = classify_surjection(t_map(A, A))
    assert c.is_small and c.kernel.space.total_dim == 0


def test_cone_extension_over_truncated_polynomials():
    e = t_map(truncated_polynomial(3), truncated_polynomial(2))
    ce = cone_extension(e)
    assert ce.tilde.labels == ("t", "t^2", "st^2")
    s = ce.tilde.index("st^2")
    assert ce.tilde.chain_degrees[s] == 1
    assert ce.tilde.d({s: 1}) == {ce.tilde.index("t^2"): 1}
    assert classify_surjection(ce.phi).kind == "acyclic-small"
    assert ce.fiber_iso.is_injective() and ce.fiber_iso.is_surjective()


def test_cone_extension_of_acyclic_kernel():
    W = CochainComplex(GradedSpace({-1: ["a"], 0: ["b"]}), {-1: RatMatrix.identity(1)})
    e = augmentation(square_zero(W))
    ce = cone_extension(e)
    assert ce.tilde.maximal_ideal.is_acyclic()


def test_cone_extension_rejects_non_small():
    with pytest.raises(ValidationError):
        cone_extension(t_map(truncated_polynomial(4), truncated_polynomial(2)))


def test_cone_extension_of_identity():
    A = truncated_polynomial(3)
    ce = cone_extension(t_map(A, A))
    assert ce.tilde.dim == A.dim and ce.shifted.dim == 0
