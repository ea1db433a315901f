from fractions import Fraction

import pytest

from orbhodge.sheaf import (
    FinitePoset,
    GradedSheaf,
    cochain_dimensions,
    cohomology,
    global_sections_dim,
    star_cohomology_audit,
    strict_chains,
)

B0 = (Fraction(0), Fraction(0))


def constant_sheaf(P: FinitePoset) -> GradedSheaf:
    maps = {(i, j): {(0, 0): Fraction(1)} for i in range(len(P)) for j in range(len(P)) if P.less(i, j)}
    return GradedSheaf(P, [[B0]] * len(P), maps)


def circle_poset() -> FinitePoset:
    # two edges glued at two vertices: an edge e is below its endpoints v (e ≺ v)
    return FinitePoset(["e1", "e2", "v1", "v2"], [("e1", "v1"), ("e1", "v2"), ("e2", "v1"), ("e2", "v2")])


def test_poset_basics():
    P = FinitePoset.from_order(range(4), lambda a, b: a < b)
    assert P.less(0, 3) and not P.less(3, 0)
    assert P.up_set(2) == [2, 3]
    assert P.covers() == [(0, 1), (1, 2), (2, 3)]
    assert P.height() == 3
    assert len(strict_chains(P, 1)) == 6


def test_poset_rejects_cycles():
    with pytest.raises(ValueError):
        FinitePoset(["a", "b"], [("a", "b"), ("b", "a")])


def test_constant_sheaf_on_chain_is_acyclic():
    P = FinitePoset.from_order(range(3), lambda a, b: a < b)
    assert cohomology(constant_sheaf(P)) == {(0, B0): 1}


def test_constant_sheaf_on_circle():
    H = cohomology(constant_sheaf(circle_poset()))
    assert H.get((0, B0)) == 1 and H.get((1, B0)) == 1


def test_global_sections_match_h0():
    F = constant_sheaf(circle_poset())
    assert global_sections_dim(F, B0) == 1


def test_euler_characteristic_constant_sheaf():
    F = constant_sheaf(circle_poset())
    C = cochain_dimensions(F)
    H = cohomology(F)
    chi_c = sum((-1) ** n * c for (n, _), c in C.items())
    chi_h = sum((-1) ** n * h for (n, _), h in H.items())
    assert chi_c == chi_h == 0


def test_grading_violation_detected():
    P = FinitePoset(["a", "b"], [("a", "b")])
    F = GradedSheaf(P, [[B0], [(Fraction(1), Fraction(0))]], {(0, 1): {(0, 0): Fraction(1)}})
    assert F.grading_violations()
    with pytest.raises(ValueError):
        cohomology(F)


def test_composition_violation_detected():
    P = FinitePoset.from_order(range(3), lambda a, b: a < b)
    maps = {(0, 1): {(0, 0): Fraction(1)}, (1, 2): {(0, 0): Fraction(1)}, (0, 2): {(0, 0): Fraction(2)}}
    F = GradedSheaf(P, [[B0]] * 3, maps)
    assert F.composition_violations() == [(0, 1, 2)]
    assert star_cohomology_audit(F)


def test_star_audit_clean_on_constant_sheaf():
    assert star_cohomology_audit(constant_sheaf(circle_poset())) == []


def test_parallel_matches_serial():
    from orbhodge.clarke import build_sheaf
    from orbhodge.clarke import ClarkePair
    from strategies import F3, TRIVIAL2

    F = build_sheaf(ClarkePair(F3, TRIVIAL2), "space")
    assert cohomology(F, jobs=2) == cohomology(F)
