from fractions import Fraction

import pytest

from orbhodge.clarke import (
    HodgeTable,
    cayley_regrade,
    dual_table,
    duality_check,
    hodge_table,
    integer_graded_table,
)
from orbhodge.constructions import (
    BHKData,
    ConstructionError,
    LatticePolytope,
    NefPartition,
    NotReflexive,
    bhk_factorization,
    bhk_pair,
    cayley_fan,
    cayley_pair,
    dual_nef_partition,
    maximal_group,
    polar_dual,
    pulling_triangulation,
    stacky_hypersurface_pair,
    weak_fano_pair,
)
from orbhodge.fans import StackyFan, convexity_check
from orbhodge.linalg import det, relative_volume
from orbhodge.tropical import verify_lower_hull
from strategies import F3, F3_PLAIN, P2


def T(d):
    return HodgeTable.from_items(((Fraction(l), Fraction(m)), v) for (l, m), v in d.items())


TRIANGLE = LatticePolytope(((1, 0), (0, 1), (-1, -1)))
CUBIC = NefPartition(TRIANGLE, ((0, 1, 2), ()))
DIAG3 = [[3, 0, 0], [0, 3, 0], [0, 0, 3]]


# -- weak Fano ---------------------------------------------------------------


def test_weak_fano():
    assert weak_fano_pair(P2).fanN.is_trivial()
    assert weak_fano_pair(F3).fanM == F3
    with pytest.raises(ConstructionError, match="not convex"):
        weak_fano_pair(F3_PLAIN)


# -- BHK ---------------------------------------------------------------------


def test_bhk_trivial_group():
    C, D = bhk_factorization(BHKData(((4,),)))
    assert C == [[1]] and D == [[4]]
    pair = bhk_pair(BHKData(((4,),)))
    assert pair.fanM.weights == (4,) and pair.fanN.weights == (1,)


def test_bhk_rejects_non_symmetry():
    with pytest.raises(ConstructionError):
        BHKData(((3,),), ((Fraction(1, 2),),))
    with pytest.raises(ConstructionError):
        BHKData(((1, 1), (1, 1)))


@pytest.mark.parametrize(
    "group",
    [(), ((Fraction(1, 3), Fraction(1, 3), Fraction(1, 3)),), "max"],
    ids=["trivial", "diagonal", "maximal"],
)
def test_bhk_factorization_identity(group):
    q = maximal_group(DIAG3) if group == "max" else group
    C, D = bhk_factorization(BHKData(tuple(map(tuple, DIAG3)), q))
    assert [[sum(C[k][i] * D[k][j] for k in range(3)) for j in range(3)] for i in range(3)] == DIAG3
    assert abs(det(C)) * abs(det(D)) == 27


def test_bhk_chain_matrix():
    B = ((2, 1), (0, 3))
    data = BHKData(B, maximal_group(B))
    C, D = bhk_factorization(data)
    assert [[sum(C[k][i] * D[k][j] for k in range(2)) for j in range(2)] for i in range(2)] == [list(r) for r in B]
    assert duality_check(bhk_pair(data)).passed


@pytest.mark.parametrize("n", range(2, 7))
def test_an_spectrum(n):
    t = hodge_table(bhk_pair(BHKData(((n + 1,),))), "mirror")
    line = {k: v for k, v in t.items() if k[0] + k[1] == 1}
    assert line == {(Fraction(k, n + 1), 1 - Fraction(k, n + 1)): 1 for k in range(1, n + 1)}


def test_fermat_cubic_mirror_swap():
    a = bhk_pair(BHKData(tuple(map(tuple, DIAG3))))
    b = bhk_pair(BHKData(tuple(map(tuple, DIAG3)), maximal_group(DIAG3)))
    assert a.validate(strict=True) == [] and b.validate(strict=True) == []
    assert dual_table(hodge_table(a, "space"), 3) == hodge_table(b, "space")
    assert dual_table(hodge_table(a, "mirror"), 3) == hodge_table(b, "mirror")


# -- polytopes and nef partitions -----------------------------------------------


def test_polar_duals():
    assert polar_dual(LatticePolytope(((1, 0), (-1, 0), (0, 1), (0, -1)))).vertices == ((-1, -1), (-1, 1), (1, -1), (1, 1))
    assert polar_dual(TRIANGLE).vertices == ((-1, -1), (-1, 2), (2, -1))
    assert polar_dual(polar_dual(TRIANGLE)) == TRIANGLE


def test_polar_errors():
    with pytest.raises(ConstructionError):
        polar_dual(LatticePolytope(((0, 0), (1, 0), (0, 1))))
    with pytest.raises(NotReflexive):
        polar_dual(LatticePolytope(((2, 0), (0, 1), (-1, -1))))


def test_lattice_polytope_rejects_non_vertices():
    with pytest.raises(ConstructionError):
        LatticePolytope(((0, 0), (2, 0), (0, 2), (1, 0)))


def test_nef_partition_k0():
    np_ = NefPartition(TRIANGLE, ((0, 1, 2),))
    assert np_.validate() == []
    assert sorted(np_.dual_parts[0]) == sorted(polar_dual(TRIANGLE).vertices)


def test_cubic_dual_partition_and_involution():
    d = dual_nef_partition(CUBIC)
    assert d.polytope == polar_dual(TRIANGLE)
    assert d.parts == ((0, 1, 2), ())
    assert dual_nef_partition(d) == CUBIC


def test_invalid_partition():
    hexagon = LatticePolytope(((1, 0), (1, 1), (0, 1), (-1, 0), (-1, -1), (0, -1)))
    # a single (-1)-curve divisor is not nef
    i = hexagon.vertices.index((1, 0))
    bad = NefPartition(hexagon, ((i,), tuple(j for j in range(6) if j != i)))
    assert any("not convex" in e for e in bad.validate())
    with pytest.raises(ConstructionError):
        dual_nef_partition(bad)
    with pytest.raises(ConstructionError):
        NefPartition(hexagon, ((0, 1),))


def test_two_part_nef_partition_of_square():
    sq = LatticePolytope(((1, 0), (0, 1), (-1, 0), (0, -1)))
    np_ = NefPartition(sq, ((0, 1), (2, 3), ()))
    assert np_.validate() == []
    assert dual_nef_partition(dual_nef_partition(np_)) == np_


def test_cubic_cayley_rays():
    f = cayley_fan(CUBIC)
    assert sorted(f.rays) == [(-1, -1, 1), (0, 0, 1), (0, 1, 1), (1, 0, 1)]


@pytest.mark.parametrize("variant", ["compact", "open-space", "open-both"])
def test_cubic_pipeline(variant):
    pair = cayley_pair(CUBIC, variant)
    assert pair.validate(strict=True) == []
    assert cayley_regrade(hodge_table(pair, "space"), 1) == T({(0, 0): 1, (1, 0): 1, (0, 1): 1, (1, 1): 1})


def test_unknown_variant():
    with pytest.raises(ValueError):
        cayley_pair(CUBIC, "sideways")


# -- pulling triangulations ------------------------------------------------------


def test_pulling_simplex():
    sd = pulling_triangulation([(0, 0), (1, 0), (0, 1)], (0, 0))
    assert sd.cells == [(0, 1, 2)]


def test_pulling_square():
    sd = pulling_triangulation([(0, 0), (1, 0), (0, 1), (1, 1)], (0, 0))
    assert sd.cells == [(0, 1, 3), (0, 2, 3)]
    assert verify_lower_hull(sd) and sd.is_star(0)


def test_pulling_polar_triangle():
    pts = polar_dual(TRIANGLE).lattice_points
    sd = pulling_triangulation(pts, (0, 0))
    assert len(sd.cells) == 9
    assert verify_lower_hull(sd) and sd.is_triangulation()
    assert all(relative_volume(sd.cell_points(c)) == 1 for c in sd.cells)


def test_pulling_impossible_star():
    with pytest.raises(ConstructionError):
        pulling_triangulation([(-2,), (-1,), (0,), (1,), (2,)], (0,))


# -- stacky hypersurfaces ---------------------------------------------------------

P1 = StackyFan(1, ((1,), (-1,)), (), ((0,), (1,)))


def test_p1_o2():
    pair = stacky_hypersurface_pair(P1, [1, 1])
    assert pair.fanM.weights[-1] == 1
    assert pair.validate(strict=True) == []
    assert integer_graded_table(hodge_table(pair, "mirror")) == T({(1, 1): 2})


def test_extra_sectors():
    pair = stacky_hypersurface_pair(P1, [2, 2])
    assert pair.fanM.weights[-1] == 2
    space = hodge_table(pair, "space")
    assert space[(Fraction(1, 2), Fraction(1, 2))] == 1
    assert space[(Fraction(3, 2), Fraction(3, 2))] == 1
    assert duality_check(pair).passed


def test_beta_one_matches_cayley():
    pair = stacky_hypersurface_pair(P2, [1, 1, 1])
    cp = cayley_pair(CUBIC)
    assert pair.fanM.same_fan(cp.fanM) and pair.fanN.same_fan(cp.fanN)


def test_hypersurface_errors():
    with pytest.raises(ConstructionError):
        stacky_hypersurface_pair(P1, [0, 1])
    with pytest.raises(ConstructionError):
        stacky_hypersurface_pair(P1, [1])
    with pytest.raises(ConstructionError):
        stacky_hypersurface_pair(StackyFan(1, ((1,), (-1,)), (2, 1), ((0,), (1,))), [1, 1])
