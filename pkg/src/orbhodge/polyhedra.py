"""Small exact polyhedral toolkit: Fourier-Motzkin, facets, hull triangulation.

Everything is brute force over rational coordinates.  The point sets met in
practice have a few dozen points in dimension at most four or five, where
exhaustive subset search is both fast enough and easy to trust.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, product
from math import ceil, floor, gcd, lcm
from typing import Sequence

from .linalg import rank, rank_and_kernel, relative_volume, solve, span_basis, transpose

Ineq = tuple[tuple[Fraction, ...], Fraction]  # coeffs . x >= rhs


def _normalize(coeffs: Sequence[Fraction], rhs: Fraction) -> Ineq:
    vals = [Fraction(c) for c in coeffs] + [Fraction(rhs)]
    den = lcm(*(v.denominator for v in vals))
    ints = [int(v * den) for v in vals]
    g = 0
    for v in ints[:-1]:
        g = gcd(g, v)
    if g == 0:
        return tuple(Fraction(0) for _ in coeffs), Fraction(rhs)
    return tuple(Fraction(v, g) for v in ints[:-1]), Fraction(ints[-1], g)


def _prune(ineqs: list[Ineq]) -> list[Ineq] | None:
    best: dict[tuple[Fraction, ...], Fraction] = {}
    for c, r in ineqs:
        c, r = _normalize(c, r)
        if not any(c):
            if r > 0:
                return None
            continue
        if c not in best or r > best[c]:
            best[c] = r
    return [(c, r) for c, r in sorted(best.items())]


def fm_solve(ineqs: Sequence[Ineq], nvars: int) -> list[Fraction] | None:
    """Exact Fourier-Motzkin feasibility for ``A x >= b``.

    Returns a rational solution (preferring small integers during
    back-substitution) or None when the system is infeasible.
    """
    system = _prune([(tuple(map(Fraction, c)), Fraction(r)) for c, r in ineqs])
    if system is None:
        return None
    stages = [system]
    for k in range(nvars - 1, -1, -1):
        pos = [q for q in system if q[0][k] > 0]
        neg = [q for q in system if q[0][k] < 0]
        new = [q for q in system if q[0][k] == 0]
        for (cp, rp), (cn, rn) in product(pos, neg):
            a, b = cp[k], -cn[k]
            new.append((tuple(b * x + a * y for x, y in zip(cp, cn)), b * rp + a * rn))
        system = _prune(new)
        if system is None:
            return None
        stages.append(system)
    x = [Fraction(0)] * nvars
    for k in range(nvars):
        sys_k = stages[nvars - 1 - k]
        lo, hi = None, None
        for c, r in sys_k:
            a = c[k]
            if a == 0:
                continue
            rest = sum(c[j] * x[j] for j in range(k))
            bound = (r - rest) / a
            if a > 0:
                lo = bound if lo is None else max(lo, bound)
            else:
                hi = bound if hi is None else min(hi, bound)
        x[k] = _pick(lo, hi)
    if not all(sum(ci * xi for ci, xi in zip(c, x)) >= r for c, r in stages[0]):
        raise AssertionError("Fourier-Motzkin back-substitution failed")
    return x


def _pick(lo: Fraction | None, hi: Fraction | None) -> Fraction:
    if lo is None and hi is None:
        return Fraction(0)
    if lo is None:
        return Fraction(min(0, floor(hi)))
    if hi is None:
        return Fraction(max(0, ceil(lo)))
    if lo > hi:
        raise AssertionError("inconsistent bounds after elimination")
    if lo <= 0 <= hi:
        return Fraction(0)
    c = Fraction(ceil(lo))
    if c <= hi:
        return c
    return (lo + hi) / 2


# -- affine geometry ---------------------------------------------------------


def affine_coordinates(points: Sequence[Sequence]) -> tuple[list[list[Fraction]], int]:
    """Coordinates of ``points`` in a rational basis of their affine span."""
    pts = [list(map(Fraction, p)) for p in points]
    base = pts[0]
    diffs = [[a - b for a, b in zip(p, base)] for p in pts]
    B = span_basis(diffs)
    s = len(B)
    if s == 0:
        return [[] for _ in pts], 0
    Bt = transpose(B)
    coords = []
    for d in diffs:
        x = solve(Bt, d)
        coords.append(x)
    return coords, s


def _facets_full(coords: Sequence[Sequence[Fraction]], s: int) -> list[tuple[tuple[Fraction, ...], Fraction, frozenset[int]]]:
    """Facets of a full-dimensional point configuration in Q^s.

    Each facet is (normal, offset, point indices) with normal . p >= offset for
    every point and equality exactly on the facet.
    """
    n = len(coords)
    seen: dict[frozenset[int], tuple] = {}
    for sub in combinations(range(n), s):
        p0 = coords[sub[0]]
        diffs = [[a - b for a, b in zip(coords[i], p0)] for i in sub[1:]]
        if diffs and rank(diffs) < s - 1:
            continue
        _, ker = rank_and_kernel(diffs, s)
        if len(ker) != 1:
            continue
        normal = ker[0]
        offset = sum(a * b for a, b in zip(normal, p0))
        vals = [sum(a * b for a, b in zip(normal, p)) - offset for p in coords]
        if all(v >= 0 for v in vals):
            pass
        elif all(v <= 0 for v in vals):
            normal = [-a for a in normal]
            offset = -offset
        else:
            continue
        face = frozenset(i for i, v in enumerate(vals) if v == 0)
        if face not in seen:
            normal, offset = _normalize(normal, offset)
            seen[face] = (normal, offset, face)
    return [seen[f] for f in sorted(seen, key=lambda f: sorted(f))]


def facets(points: Sequence[Sequence]) -> list[tuple[tuple[Fraction, ...], Fraction, frozenset[int]]]:
    """Facets of Conv(points), which must be full-dimensional in the ambient space."""
    pts = [list(map(Fraction, p)) for p in points]
    d = len(pts[0])
    coords, s = affine_coordinates(pts)
    if s != d:
        raise ValueError("point configuration is not full-dimensional")
    return _facets_full(pts, d)


def relative_facets(points: Sequence[Sequence], indices: Sequence[int]) -> list[frozenset[int]]:
    """Facets (as index sets) of Conv(points[indices]) inside its affine span."""
    idx = list(indices)
    coords, s = affine_coordinates([points[i] for i in idx])
    if s == 0:
        return []
    return [frozenset(idx[i] for i in f) for _, _, f in _facets_full(coords, s)]


def all_faces(points: Sequence[Sequence], indices: Sequence[int]) -> list[frozenset[int]]:
    """All nonempty faces of Conv(points[indices]) as sets of point indices."""
    top = frozenset(indices)
    out = {top}
    stack = [top]
    while stack:
        F = stack.pop()
        for G in relative_facets(points, sorted(F)):
            if G not in out:
                out.add(G)
                stack.append(G)
    return sorted(out, key=lambda f: (len(f), sorted(f)))


def vertex_indices(points: Sequence[Sequence], indices: Sequence[int] | None = None) -> list[int]:
    """Indices of the points that are vertices of their convex hull."""
    idx = list(range(len(points))) if indices is None else list(indices)
    coords, s = affine_coordinates([points[i] for i in idx])
    if s == 0:
        return [idx[0]]
    F = _facets_full(coords, s)
    out = []
    for local, i in enumerate(idx):
        mine = [f for f in F if local in f[2]]
        if not mine or rank([list(f[0]) for f in mine]) < s:
            continue
        common = frozenset.intersection(*(f[2] for f in mine))
        if common == {local}:
            out.append(i)
    return sorted(out)


def triangulate(points: Sequence[Sequence], indices: Sequence[int] | None = None) -> list[tuple[int, ...]]:
    """Pulling triangulation of Conv(points[indices]) using only its vertices."""
    idx = sorted(range(len(points)) if indices is None else indices)
    coords, s = affine_coordinates([points[i] for i in idx])
    if s == 0:
        return [(idx[0],)]
    verts = vertex_indices(points, idx)
    v = verts[0]
    out: list[tuple[int, ...]] = []
    for F in relative_facets(points, idx):
        if v in F:
            continue
        for simplex in triangulate(points, sorted(F)):
            out.append(tuple(sorted((v,) + simplex)))
    return sorted(set(out))


def hull_volume(points: Sequence[Sequence[int]]) -> int:
    """Normalized lattice volume of Conv(points) inside its own lattice span."""
    return sum(relative_volume([points[i] for i in simplex]) for simplex in triangulate(points))


def contains(facet_list, point: Sequence) -> bool:
    return all(sum(a * Fraction(x) for a, x in zip(n, point)) >= off for n, off, _ in facet_list)


def lattice_points(vertices: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """All lattice points of a full-dimensional lattice polytope, sorted."""
    d = len(vertices[0])
    F = facets(vertices)
    lo = [min(v[i] for v in vertices) for i in range(d)]
    hi = [max(v[i] for v in vertices) for i in range(d)]
    out = []
    for p in product(*(range(int(floor(lo[i])), int(ceil(hi[i])) + 1) for i in range(d))):
        if contains(F, p):
            out.append(tuple(p))
    return sorted(out)


def vertices_from_halfspaces(ineqs: Sequence[Ineq], d: int) -> list[tuple[Fraction, ...]]:
    """Vertices of the bounded polyhedron {x : c . x >= r} by subset search."""
    ineqs = [(tuple(map(Fraction, c)), Fraction(r)) for c, r in ineqs]
    found = set()
    for sub in combinations(range(len(ineqs)), d):
        A = [list(ineqs[i][0]) for i in sub]
        if rank(A) < d:
            continue
        x = solve(A, [ineqs[i][1] for i in sub])
        if x is None:
            continue
        if all(sum(a * b for a, b in zip(c, x)) >= r for c, r in ineqs):
            found.add(tuple(x))
    return sorted(found)
