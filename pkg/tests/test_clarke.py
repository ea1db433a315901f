from fractions import Fraction

import pytest

from orbhodge.clarke import (
    ClarkePair,
    HodgeTable,
    build_sheaf,
    cayley_regrade,
    dual_table,
    duality_check,
    hodge_table,
    integer_graded_table,
    pair_poset,
    xi_restriction,
    xi_stalk,
)
from orbhodge.fans import StackyFan
from orbhodge.linalg import n_choose
from orbhodge.sheaf import cochain_dimensions, cohomology, star_cohomology_audit
from strategies import F3, F3_MIRROR, F3_SPACE, P1XP1, P2, TRIVIAL2, random_clarke_pairs


def T(d):
    return HodgeTable.from_items(((Fraction(l), Fraction(m)), v) for (l, m), v in d.items())


F3_PAIR = ClarkePair(F3, TRIVIAL2)
E = StackyFan(1, ((1,),), (), ((0,),))


def test_pair_poset_rank_one():
    pp = pair_poset(ClarkePair(E, E))
    assert sorted(pp.elements) == [((), ()), ((), (0,)), ((0,), ())]


def test_pair_poset_trivial_dual():
    assert len(pair_poset(F3_PAIR)) == 9
    assert len(pair_poset(ClarkePair(P2, TRIVIAL2))) == 7


def test_pair_poset_rejects_irregular():
    with pytest.raises(ValueError):
        pair_poset(ClarkePair(E, StackyFan(1, ((-1,),), (), ((0,),))))


def test_zero_stalk_dimensions():
    st = xi_stalk(ClarkePair(P2, TRIVIAL2), ((), ()), "space")
    dims = st.dims()
    for a in range(3):
        assert dims[(Fraction(a), Fraction(0))] == n_choose(2, a)


def test_stacky_ray_stalk():
    st = xi_stalk(F3_PAIR, ((0,), ()), "space")
    assert st.dims()[(Fraction(1, 2), Fraction(1, 2))] == 1


def test_restriction_identity_and_support_rule():
    x = ((0,), ())
    st = xi_stalk(F3_PAIR, x, "space")
    ident = xi_restriction(F3_PAIR, x, x)
    assert ident == {(k, k): 1 for k in range(len(st.labels))}
    r = xi_restriction(F3_PAIR, x, ((), ()))
    killed = [c for c, (a, w, i, j) in enumerate(st.labels) if st.box1.basis[i].age]
    assert killed and all(col not in {c for (_, c) in r} for col in killed)
    with pytest.raises(ValueError):
        xi_restriction(F3_PAIR, ((), ()), x)


def test_f3_tables():
    assert hodge_table(F3_PAIR, "space") == T(F3_SPACE)
    assert hodge_table(F3_PAIR, "mirror") == T(F3_MIRROR)
    assert hodge_table(F3_PAIR, "xi") == T(F3_SPACE)


def test_p2_and_p1xp1_space_tables():
    assert hodge_table(ClarkePair(P2, TRIVIAL2)) == T({(0, 0): 1, (1, 1): 1, (2, 2): 1})
    assert hodge_table(ClarkePair(P1XP1, TRIVIAL2)) == T({(0, 0): 1, (1, 1): 2, (2, 2): 1})


def test_unknown_side():
    with pytest.raises(ValueError):
        hodge_table(F3_PAIR, "left")


@pytest.mark.parametrize("fan", [F3, P2, P1XP1], ids=["F3", "P2", "P1xP1"])
def test_duality_named(fan):
    r = duality_check(ClarkePair(fan, TRIVIAL2))
    assert r.passed, r.summary()


def test_weak_fano_totals():
    for fan, total in ((P2, 3), (P1XP1, 4), (F3, 6)):
        assert hodge_table(ClarkePair(fan, TRIVIAL2), "mirror").total() == total


RANDOM_PAIRS = random_clarke_pairs(50)


def test_random_pairs_are_varied():
    assert len(RANDOM_PAIRS) >= 50
    assert any(not p.fanN.is_trivial() for p in RANDOM_PAIRS)
    assert any(max(p.fanM.weights + p.fanN.weights) > 1 for p in RANDOM_PAIRS)
    assert all(len(p.fanM.rays) <= 6 and len(p.fanN.rays) <= 6 for p in RANDOM_PAIRS)


@pytest.mark.parametrize("k", range(len(RANDOM_PAIRS)))
def test_random_duality(k):
    pair = RANDOM_PAIRS[k]
    assert pair.validate(strict=True) == []
    r = duality_check(pair)
    assert r.passed, r.summary()
    for side in ("space", "mirror"):
        F = build_sheaf(pair, side)
        assert F.composition_violations() == []
        C, H = cochain_dimensions(F), cohomology(F)
        for b in F.bidegrees():
            chi_c = sum((-1) ** n * c for (n, bb), c in C.items() if bb == b)
            chi_h = sum((-1) ** n * h for (n, bb), h in H.items() if bb == b)
            assert chi_c == chi_h


@pytest.mark.parametrize("k", range(0, 50, 5))
def test_star_audit_random(k):
    for side in ("space", "mirror"):
        assert star_cohomology_audit(build_sheaf(RANDOM_PAIRS[k], side)) == []


def test_star_audit_f3():
    for side in ("space", "mirror"):
        assert star_cohomology_audit(build_sheaf(F3_PAIR, side)) == []


def test_table_helpers():
    assert integer_graded_table(T(F3_SPACE)) == T({(0, 0): 1, (1, 1): 2, (2, 2): 1})
    assert integer_graded_table(T({(0.5, 0.5): 3})) == {}
    assert cayley_regrade(T({(1, 1): 1}), 1) == T({(0, 0): 1})
    assert cayley_regrade(T(F3_SPACE), 0) == T(F3_SPACE)
    with pytest.raises(ValueError):
        cayley_regrade(T(F3_SPACE), -1)
    assert dual_table(T(F3_SPACE), 2) == T(F3_MIRROR)


def test_validate_reports_prefixed_kinds():
    bad = ClarkePair(StackyFan(2, ((2, 0),), (), ((0,),)), TRIVIAL2).validate()
    assert bad and bad[0].kind == "sigma.primitive"
    assert ClarkePair(F3.__class__(2, F3.rays, (1, 1, 1, 1), F3.max_cones), TRIVIAL2).validate(strict=True)[0].kind == "sigma.convexity"
