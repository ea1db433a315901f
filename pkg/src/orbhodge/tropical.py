"""Regular subdivisions, the tropical cell poset and tropical Jacobian sheaves.

We use the min convention throughout: the tropical polynomial of heighted
points (A, φ) is x̌ ↦ min_m (<m, x̌> + φ(m)), and its cells are the lower
faces of the lifted configuration {(m, φ(m))}.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Sequence

from .boxes import BoxSpace
from .clarke import HodgeTable, table_from_cohomology
from .fans import Cone, StackyFan
from .linalg import dot, rank, solve
from .polyhedra import affine_coordinates, all_faces
from .sheaf import FinitePoset, GradedSheaf, cohomology
from .stalks import StalkSpec, TensorSheaf, make_stalk


@dataclass(frozen=True)
class HeightedPoints:
    points: tuple[tuple[int, ...], ...]
    heights: tuple[Fraction, ...]

    def __post_init__(self):
        pts = tuple(tuple(int(x) for x in p) for p in self.points)
        hs = tuple(Fraction(h) for h in self.heights)
        if len(pts) != len(hs):
            raise ValueError("points and heights differ in length")
        if len(set(pts)) != len(pts):
            raise ValueError("points must be distinct")
        zero = (0,) * len(pts[0])
        if zero not in pts:
            raise ValueError("the origin must be one of the points")
        if hs[pts.index(zero)] != 0:
            raise ValueError("the height of the origin must be 0")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "heights", hs)

    @property
    def rank(self) -> int:
        return len(self.points[0])

    @property
    def origin(self) -> int:
        return self.points.index((0,) * self.rank)


@dataclass
class RegularSubdivision:
    hp: HeightedPoints
    cells: list[tuple[int, ...]]
    certificates: list[tuple[tuple[Fraction, ...], Fraction]]
    span_dim: int

    def cell_points(self, cell: Sequence[int]) -> list[tuple[int, ...]]:
        return [self.hp.points[i] for i in cell]

    def is_triangulation(self) -> bool:
        return all(len(c) == self.span_dim + 1 for c in self.cells)

    def is_star(self, base: int | None = None) -> bool:
        base = self.hp.origin if base is None else base
        return all(base in c for c in self.cells)

    @cached_property
    def faces(self) -> list[tuple[int, ...]]:
        """All faces of all cells (as sorted index tuples)."""
        out = set()
        pts = self.hp.points
        for c in self.cells:
            if len(c) == rank([[a - b for a, b in zip(pts[i], pts[c[0]])] for i in c[1:]]) + 1:
                for k in range(1, len(c) + 1):
                    out.update(combinations(c, k))
            else:
                out.update(tuple(sorted(f)) for f in all_faces(pts, c))
        return sorted(out, key=lambda f: (len(f), f))


def regular_subdivision(hp: HeightedPoints, require_triangulation: bool = False) -> RegularSubdivision:
    """Lower-hull subdivision of the lifted points by exhaustive subset search.

    Every affinely independent (s+1)-subset defines an affine function through
    its lifted points; it is a lower facet when no lifted point lies strictly
    below it, and the cell is the set of points where equality holds.
    """
    coords, s = affine_coordinates(hp.points)
    n = len(hp.points)
    if s == 0:
        return RegularSubdivision(hp, [tuple(range(n))], [((), Fraction(0))], 0)
    found: dict[tuple[int, ...], tuple[tuple[Fraction, ...], Fraction]] = {}
    for sub in combinations(range(n), s + 1):
        A = [list(coords[i]) + [Fraction(1)] for i in sub]
        if rank(A) < s + 1:
            continue
        sol = solve(A, [hp.heights[i] for i in sub])
        normal, const = tuple(sol[:s]), sol[s]
        vals = [hp.heights[j] - sum(a * b for a, b in zip(normal, coords[j])) - const for j in range(n)]
        if any(v < 0 for v in vals):
            continue
        cell = tuple(j for j in range(n) if vals[j] == 0)
        found.setdefault(cell, (normal, const))
    cells = sorted(found)
    sd = RegularSubdivision(hp, cells, [found[c] for c in cells], s)
    if require_triangulation and not sd.is_triangulation():
        raise ValueError("heights are degenerate: subdivision has non-simplicial cells")
    return sd


def verify_lower_hull(sd: RegularSubdivision) -> bool:
    """Check each certificate: equality on the cell, strict inequality elsewhere."""
    coords, _ = affine_coordinates(sd.hp.points)
    for cell, (normal, const) in zip(sd.cells, sd.certificates):
        for j, x in enumerate(coords):
            v = sd.hp.heights[j] - sum(a * b for a, b in zip(normal, x)) - const
            if (j in cell and v != 0) or (j not in cell and v <= 0):
                return False
    return True


def trop_min(hp: HeightedPoints, x: Sequence) -> tuple[Fraction, list[tuple[int, ...]]]:
    """min_m (<m, x> + φ(m)) and the points attaining it."""
    vals = [dot(p, [Fraction(v) for v in x]) + h for p, h in zip(hp.points, hp.heights)]
    lo = min(vals)
    return lo, [p for p, v in zip(hp.points, vals) if v == lo]


# -- the tropical poset -------------------------------------------------------


@dataclass
class TropicalPoset:
    fan: StackyFan
    sd: RegularSubdivision
    elements: list[tuple[Cone, tuple[int, ...]]]
    poset: FinitePoset

    def __len__(self) -> int:
        return len(self.elements)


def in_normal_cone(sd: RegularSubdivision, n: Sequence[int], cell: Sequence[int]) -> bool:
    """Whether <n, .> attains its minimum over Conv(A) on all of ``cell``."""
    vals = [dot(n, p) for p in sd.hp.points]
    lo = min(vals)
    return all(vals[i] == lo for i in cell)


def trop_poset_0(fan: StackyFan, sd: RegularSubdivision) -> TropicalPoset:
    """Cells (c, τ) of T(Σ, w)_0: τ ∋ 0 a face of SD(w) and c ⊆ nc(f_τ)."""
    if fan.rank != sd.hp.rank:
        raise ValueError("fan and point configuration have different ranks")
    o = sd.hp.origin
    if not sd.is_star(o):
        raise ValueError("subdivision is not a star subdivision at the origin")
    taus = [f for f in sd.faces if o in f]
    elems = []
    for c in fan.cones:
        for t in taus:
            if all(in_normal_cone(sd, fan.rays[i], t) for i in c):
                elems.append((c, t))

    def less(x, y):
        return x != y and set(y[0]) <= set(x[0]) and set(y[1]) <= set(x[1])

    return TropicalPoset(fan, sd, elems, FinitePoset.from_order(elems, less))


def _tau_generators(sd: RegularSubdivision, tau: Sequence[int]) -> tuple[tuple[int, ...], list[tuple[int, ...]]]:
    o = sd.hp.origin
    labels = tuple(i for i in tau if i != o)
    return labels, [sd.hp.points[i] for i in labels]


class _JacobianBuilder:
    def __init__(self, tp: TropicalPoset, orbifold: bool):
        self.tp = tp
        self.d = tp.fan.rank
        self.orbifold = orbifold
        self._boxes: dict = {}
        stalks = []
        for x in tp.elements:
            c, tau = x
            labels, tgens = _tau_generators(tp.sd, tau)
            if tgens and rank(tgens) < len(tgens):
                raise ValueError(f"cell {tau} is not a simplex")
            Bc = self._box(("c", c), c, tp.fan.generators(c) if orbifold else None)
            Bt = self._box(("t", labels), labels, tgens)
            spec = StalkSpec(tp.fan.primitive_generators(c), tgens, Bc, Bt)
            # B_c age l, B_τ age m: λ = k - m + l, μ = l + m
            stalks.append(make_stalk(x, spec, self.d, lambda k, l, m: (k - m + l, l + m)))
        self.tensor = TensorSheaf(tp.poset, stalks)

    def _box(self, key, labels, gens) -> BoxSpace:
        if key not in self._boxes:
            if gens is None:
                # non-orbifold: only the untwisted sector of the fan cone
                B = BoxSpace((), [], self.d)
                B.rays = tuple(labels)
            else:
                B = BoxSpace(labels, gens, self.d)
            self._boxes[key] = B
        return self._boxes[key]


def jacobian_sheaf(tp: TropicalPoset, orbifold: bool = True) -> GradedSheaf:
    """The tropical Jacobian sheaf J_orb (or J without the fan's box factor)."""
    return _JacobianBuilder(tp, orbifold).tensor.sheaf()


def jacobian_stalks(tp: TropicalPoset, orbifold: bool = True):
    return _JacobianBuilder(tp, orbifold).tensor.stalks


def trop_hodge(tp: TropicalPoset, orbifold: bool = True, jobs: int = 1) -> HodgeTable:
    """f^{λ,μ} = Σ_n dim H^n(T(Σ,w)_0, J^{λ, μ-n})."""
    return table_from_cohomology(cohomology(jacobian_sheaf(tp, orbifold), jobs=jobs))


def delta_heighted_points(fan: StackyFan, phi_values: Sequence[int]) -> HeightedPoints:
    """{0} ∪ Σ[1] (scaled generators) with heights from a support function."""
    pts = [(0,) * fan.rank] + [fan.scaled(i) for i in range(len(fan.rays))]
    hs = [Fraction(0)] + [Fraction(fan.weights[i] * phi_values[i]) for i in range(len(fan.rays))]
    return HeightedPoints(tuple(pts), tuple(hs))
