import random
from fractions import Fraction

import pytest

from orbhodge.clarke import ClarkePair, _SheafBuilder, hodge_table, pair_poset
from orbhodge.fans import StackyFan, find_support_function
from orbhodge.sheaf import star_cohomology_audit
from orbhodge.tropical import (
    HeightedPoints,
    delta_heighted_points,
    jacobian_sheaf,
    jacobian_stalks,
    regular_subdivision,
    trop_hodge,
    trop_min,
    trop_poset_0,
    verify_lower_hull,
)
from strategies import F3, P1XP1, P2, TRIVIAL2, random_clarke_pairs

EG = HeightedPoints(((0, 0), (0, 1), (1, 1), (2, 1)), (0, 0, 1, 4))


def test_eg_trop_cells():
    sd = regular_subdivision(EG)
    assert sd.cells == [(0, 1, 2), (0, 2, 3)]
    assert verify_lower_hull(sd)
    assert sd.is_triangulation() and sd.is_star()


def test_eg_trop_min_samples():
    rng = random.Random(3)
    for _ in range(20):
        x1, x2 = Fraction(rng.randint(-30, 30), rng.randint(1, 7)), Fraction(rng.randint(-30, 30), rng.randint(1, 7))
        expected = min(0, x2, x1 + x2 + 1, 2 * x1 + x2 + 4)
        assert trop_min(EG, (x1, x2))[0] == expected
    assert trop_min(EG, (-1, 0)) == (0, [(0, 0), (0, 1), (1, 1)])


def test_heighted_points_validation():
    with pytest.raises(ValueError):
        HeightedPoints(((1, 0),), (0,))
    with pytest.raises(ValueError):
        HeightedPoints(((0, 0), (0, 0)), (0, 0))
    with pytest.raises(ValueError):
        HeightedPoints(((0, 0),), (1,))


def test_non_regular_heights_give_coarser_cells():
    hp = HeightedPoints(((0, 0), (1, 0), (0, 1), (1, 1)), (0, 0, 0, 0))
    sd = regular_subdivision(hp)
    assert sd.cells == [(0, 1, 2, 3)]
    with pytest.raises(ValueError):
        regular_subdivision(hp, require_triangulation=True)


def test_eg_trop2_cell():
    sd = regular_subdivision(EG)
    fan = StackyFan(2, ((1, 0), (0, 1)), (), ((0, 1),))
    tp = trop_poset_0(fan, sd)
    # the ray (1,0) is the inner normal of the edge Conv((0,0),(0,1))
    assert ((0,), (0, 1)) in tp.elements
    assert ((1,), (0, 1)) not in tp.elements
    assert ((1,), (0,)) in tp.elements


def test_jacobian_stalk_stacky_ray():
    fan = StackyFan(2, ((1, 0),), (2,), ((0,),))
    hp = HeightedPoints(((0, 0), (0, 1)), (0, 0))
    tp = trop_poset_0(fan, regular_subdivision(hp))
    stalks = jacobian_stalks(tp, orbifold=True)
    st = stalks[tp.elements.index(((0,), (0,)))]
    assert st.dims().get((Fraction(1, 2), Fraction(1, 2))) == 1


def test_star_audit_eg_trop():
    tp = trop_poset_0(TRIVIAL2, regular_subdivision(EG))
    assert star_cohomology_audit(jacobian_sheaf(tp, orbifold=False)) == []


def test_subdivision_matches_delta():
    phi = find_support_function(F3)
    sd = regular_subdivision(delta_heighted_points(F3, phi.values))
    cells = {frozenset(sd.cell_points(c)) for c in sd.cells}
    expected = {frozenset([(0, 0)] + F3.generators(c)) for c in F3.max_cones}
    assert cells == expected


def cross_route(pair):
    phi = find_support_function(pair.fanM, strict=True)
    sd = regular_subdivision(delta_heighted_points(pair.fanM, phi.values))
    tp = trop_poset_0(pair.fanN, sd)
    return tp, trop_hodge(tp, orbifold=True)


@pytest.mark.parametrize("fan", [F3, P2, P1XP1], ids=["F3", "P2", "P1xP1"])
def test_cross_route_named(fan):
    pair = ClarkePair(fan, TRIVIAL2)
    assert cross_route(pair)[1] == hodge_table(pair, "mirror")


@pytest.mark.parametrize("k", range(50))
def test_cross_route_random(k):
    pair = random_clarke_pairs(50)[k]
    tp, table = cross_route(pair)
    assert table == hodge_table(pair, "mirror")
    # poset isomorphism with stalkwise equal bidegree dimensions
    pp = pair_poset(pair)
    assert len(tp) == len(pp)
    stalks = jacobian_stalks(tp, orbifold=True)
    mirror = _SheafBuilder(pair, "mirror").stalks
    # point i > 0 of the configuration is the scaled ray i - 1 of fanM,
    # so the cell (č, Δ_c) corresponds to (c, č)
    trop = {(cc, tuple(i - 1 for i in tau if i)): st.dims() for (cc, tau), st in zip(tp.elements, stalks)}
    for x, st in zip(pp.elements, mirror):
        assert trop[(x[1], x[0])] == st.dims()
