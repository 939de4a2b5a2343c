import json
import random

import pytest

from mcdeform.complexes import CochainComplex, GradedSpace
from mcdeform.dgla import coefficient_extension, dgla_cohomology
from mcdeform.functors import (FunctorUnderTest, glue_mc, manetti_battery,
                               schlessinger_homotopy_battery, split_mc, standard_battery,
                               tangent_of_functor, tangent_report)
from mcdeform.mcgauge import sample_mc
from mcdeform.qlinalg import RatMatrix
from mcdeform.zoo import named


def test_tangent_matches_cohomology_and_cocycles(test_zoo):
    for L in test_zoo:
        for n in range(0, 4):
            assert tangent_of_functor(FunctorUnderTest.deformations(L), n) == \
                dgla_cohomology(L, n + 1)[0], L.name
            Lc = L.complex()
            z = len(L.indices_in_degree(n + 1)) - Lc.d(n + 1).rank() if L.indices_in_degree(n + 1) \
                else 0
            assert tangent_of_functor(FunctorUnderTest.maurer_cartan(L), n) == z, L.name


def test_tangent_report_with_complexes(lobs):
    V = CochainComplex(GradedSpace({0: ["a"], -1: ["b"], -2: ["c"]}),
                       {-2: RatMatrix.from_columns([[1]], rows=1)})
    W = CochainComplex(GradedSpace({-1: ["x"]}))
    rep = tangent_report(FunctorUnderTest.deformations(lobs), complexes=(V, W))
    assert rep.tangent[0] == 1 and rep.tangent[1] == 1
    assert rep.lines()[0].startswith("functor")


VERDICTS = [
    (lambda: FunctorUnderTest.deformations(named("Lobs")), "deformation functor"),
    (lambda: FunctorUnderTest.deformations(named("Heis")), "deformation functor"),
    (lambda: FunctorUnderTest.maurer_cartan(named("Lobs")), "pre-deformation functor"),
    (lambda: FunctorUnderTest.maurer_cartan(named("Labh1")), "pre-deformation functor"),
    (lambda: FunctorUnderTest.broken(named("Labh1"), "cone(e0->k)"), "pre-deformation functor"),
    (lambda: FunctorUnderTest.broken(named("Lobs"), "cone(e0->k)"), "pre-deformation functor"),
    (lambda: FunctorUnderTest.constant(), "deformation functor"),
]


@pytest.mark.parametrize("make,verdict", VERDICTS)
def test_manetti_verdicts(make, verdict):
    rep = manetti_battery(make())
    assert rep.verdict == verdict, rep.text()
    assert json.loads(rep.to_json())["verdict"] == verdict


def test_broken_functor_is_flagged_on_its_diagram():
    rep = manetti_battery(FunctorUnderTest.broken(named("Labh1"), "cone(e0->k)"))
    fails = rep.failures("axiom 4")
    assert fails and all(f.diagram == "cone(e0->k)" for f in fails)


def test_mc_functor_fails_injectivity_only():
    rep = manetti_battery(FunctorUnderTest.maurer_cartan(named("Labh1")))
    assert rep.failures() == rep.failures("axiom 4")


@pytest.mark.parametrize("make", [v[0] for v in VERDICTS])
def test_schlessinger_battery_passes(make):
    assert schlessinger_homotopy_battery(make()).verdict == "pass"


def test_reports_are_reproducible():
    F = FunctorUnderTest.deformations(named("End(k2 -> k2)"))
    assert manetti_battery(F).to_json() == manetti_battery(F).to_json()


def test_glue_split_roundtrip():
    L = named("End(k2 -> k2)")
    rng = random.Random(77)
    for cs in standard_battery().cospans:
        P, pa, pc = cs.fiber
        NP = coefficient_extension(L, P)
        NA, NC = coefficient_extension(L, pa.target), coefficient_extension(L, pc.target)
        for _ in range(5):
            w = sample_mc(L, P, rng, host=NP)
            a, c = split_mc(w, pa, pc, NA, NC)
            assert a.is_mc() and c.is_mc()
            assert glue_mc(a, c, P, NP) == w
