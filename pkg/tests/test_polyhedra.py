from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from orbhodge.polyhedra import (
    facets,
    fm_solve,
    hull_volume,
    lattice_points,
    triangulate,
    vertex_indices,
    vertices_from_halfspaces,
)


def test_fm_feasible_and_infeasible():
    ineqs = [((Fraction(1), Fraction(0)), Fraction(1)), ((Fraction(0), Fraction(1)), Fraction(2))]
    x = fm_solve(ineqs, 2)
    assert x is not None and x[0] >= 1 and x[1] >= 2
    bad = [((Fraction(1),), Fraction(1)), ((Fraction(-1),), Fraction(0))]
    assert fm_solve(bad, 1) is None


def test_square_facets_and_points():
    sq = [(-1, -1), (1, -1), (1, 1), (-1, 1)]
    assert len(facets(sq)) == 4
    assert len(lattice_points(sq)) == 9
    assert hull_volume(sq) == 8


def test_vertices_of_configuration_with_interior_points():
    pts = [(0, 0), (2, 0), (0, 2), (1, 0), (1, 1)]
    assert vertex_indices(pts) == [0, 1, 2]


def test_halfspaces_polar_triangle():
    ineqs = [((Fraction(v[0]), Fraction(v[1])), Fraction(-1)) for v in [(1, 0), (0, 1), (-1, -1)]]
    verts = sorted(vertices_from_halfspaces(ineqs, 2))
    assert verts == [(-1, -1), (-1, 2), (2, -1)]


@given(st.lists(st.tuples(st.integers(-3, 3), st.integers(-3, 3)), min_size=3, max_size=7, unique=True))
@settings(max_examples=60, deadline=None)
def test_triangulation_volume_matches_brute_force(pts):
    from orbhodge.linalg import rank, relative_volume

    if rank([[a - pts[0][0], b - pts[0][1]] for a, b in pts[1:]]) < 2:
        return
    tri = triangulate(pts)
    vol = sum(relative_volume([pts[i] for i in t]) for t in tri)
    # pick's theorem: 2A = 2I + B - 2
    lp = lattice_points([pts[i] for i in vertex_indices(pts)])
    F = facets(pts)
    boundary = sum(1 for p in lp if any(sum(n * x for n, x in zip(nv, p)) == off for nv, off, _ in F))
    interior = len(lp) - boundary
    assert vol == 2 * interior + boundary - 2
