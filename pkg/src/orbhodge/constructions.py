"""Recipes producing Clarke pairs: weak Fano stacks, BHK data, nef partitions
and the stacky fix for non-convex hypersurface data."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import floor
from typing import Literal, Sequence

from .clarke import ClarkePair
from .fans import StackyFan, convexity_check, delta_volume, validate_fan
from .linalg import dot, inverse, lattice_basis, matmul, primitive, rank, transpose
from .polyhedra import facets, hull_volume, lattice_points, vertex_indices, vertices_from_halfspaces
from .tropical import HeightedPoints, RegularSubdivision, regular_subdivision


class ConstructionError(ValueError):
    """Input data does not satisfy the hypotheses of a recipe."""


# -- weak Fano ----------------------------------------------------------------


def weak_fano_pair(f: StackyFan) -> ClarkePair:
    """The pair (Σ, {0}); rejects fans whose Δ_Σ is not convex."""
    bad = validate_fan(f)
    if bad:
        raise ConstructionError("invalid fan: " + "; ".join(map(str, bad)))
    if not convexity_check(f):
        points = [(0,) * f.rank] + [f.scaled(i) for i in range(len(f.rays))]
        deficit = hull_volume(points) - delta_volume(f)
        raise ConstructionError(f"Δ_Σ is not convex (hull volume exceeds Σ vol(Δ_c) by {deficit})")
    return ClarkePair(f, StackyFan.trivial(f.rank))


# -- BHK ----------------------------------------------------------------------


@dataclass(frozen=True)
class BHKData:
    """Exponent matrix B and a group Q_B of diagonal symmetries (mod 1)."""

    matrix: tuple[tuple[int, ...], ...]
    group: tuple[tuple[Fraction, ...], ...] = ()

    def __post_init__(self):
        B = tuple(tuple(int(x) for x in row) for row in self.matrix)
        n = len(B)
        if any(len(row) != n for row in B):
            raise ConstructionError("BHK matrix must be square")
        if any(x < 0 for row in B for x in row):
            raise ConstructionError("BHK matrix must be nonnegative")
        if rank(B) < n:
            raise ConstructionError("BHK matrix must be invertible")
        group = []
        for q in self.group:
            q = tuple(Fraction(x) - floor(Fraction(x)) for x in q)
            if len(q) != n:
                raise ConstructionError("group element has the wrong length")
            if any(Fraction(v).denominator != 1 for v in (sum(B[k][i] * q[k] for k in range(n)) for i in range(n))):
                raise ConstructionError(f"group element {[str(x) for x in q]} is not a symmetry (B^T q not integral)")
            group.append(q)
        object.__setattr__(self, "matrix", B)
        object.__setattr__(self, "group", tuple(group))

    @property
    def size(self) -> int:
        return len(self.matrix)


def maximal_group(B: Sequence[Sequence[int]]) -> tuple[tuple[Fraction, ...], ...]:
    """Generators of S_B = {q : B^T q ∈ Z^n} / Z^n (columns of B^{-T})."""
    Binv_t = inverse(transpose(B))
    cols = transpose(Binv_t)
    return tuple(tuple(x - floor(x) for x in c) for c in cols)


def bhk_factorization(data: BHKData) -> tuple[list[list[int]], list[list[int]]]:
    """Integer matrices (C, D) with B = C^T D from the enlarged lattice L_Q.

    L_Q = Z^n + Z·lifts(Q_B) gets a basis G (as columns) from a Hermite
    normal form; C = G^{-1} writes the standard basis in that basis and
    D = G^T B is integral because B^T maps L_Q into Z^n.
    """
    B = [list(r) for r in data.matrix]
    n = data.size
    gens = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)] + [list(q) for q in data.group]
    basis = lattice_basis(gens)
    if len(basis) != n:
        raise ConstructionError("enlarged lattice has the wrong rank")
    G = transpose(basis)
    C = [[int(x) for x in row] for row in inverse(G)]
    D = matmul(transpose(G), B)
    if any(Fraction(x).denominator != 1 for row in D for x in row):
        raise ConstructionError("group is not contained in S_B")
    D = [[int(x) for x in row] for row in D]
    if matmul(transpose(C), D) != B:
        raise AssertionError("factorization identity B = C^T D failed")
    return C, D


def _cone_of_columns(A: Sequence[Sequence[int]]) -> StackyFan:
    rays, weights = [], []
    for col in transpose(A):
        g, r = primitive(col)
        rays.append(r)
        weights.append(g)
    return StackyFan(len(A), tuple(rays), tuple(weights), (tuple(range(len(rays))),))


def bhk_pair(data: BHKData) -> ClarkePair:
    """Clarke pair (Cone(cols D), Cone(cols C)) of the factorization.

    The stacky cone over cols(D) is placed in M so that the mirror table is
    the one of the quotient 𝔸^n / Q_B with potential w_B.
    """
    C, D = bhk_factorization(data)
    return ClarkePair(_cone_of_columns(D), _cone_of_columns(C))


# -- polytopes and nef partitions ----------------------------------------------


class NotReflexive(ConstructionError):
    def __init__(self, vertices):
        self.vertices = vertices
        super().__init__("polar dual has non-integral vertices: " + ", ".join(str(tuple(str(x) for x in v)) for v in vertices))


@dataclass(frozen=True)
class LatticePolytope:
    vertices: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        verts = tuple(sorted({tuple(int(x) for x in v) for v in self.vertices}))
        if len(verts) > 1 and vertex_indices(verts) != list(range(len(verts))):
            raise ConstructionError("listed points are not exactly the vertices of their hull")
        object.__setattr__(self, "vertices", verts)

    @property
    def rank(self) -> int:
        return len(self.vertices[0])

    @cached_property
    def facets(self):
        return facets(self.vertices)

    @cached_property
    def lattice_points(self) -> list[tuple[int, ...]]:
        return lattice_points(self.vertices)

    def has_interior_origin(self) -> bool:
        return all(off < 0 for _, off, _ in self.facets)


def polar_dual(P: LatticePolytope) -> LatticePolytope:
    """Δ̌ = {n : <n, m> >= -1 for m ∈ Δ}; raises NotReflexive if not integral."""
    if not P.has_interior_origin():
        raise ConstructionError("origin is not in the interior")
    verts = []
    for normal, off, _ in P.facets:
        verts.append(tuple(x / (-off) for x in normal))
    if any(x.denominator != 1 for v in verts for x in v):
        raise NotReflexive(verts)
    return LatticePolytope(tuple(tuple(int(x) for x in v) for v in verts))


def _hull_vertices(points: Sequence[Sequence]) -> list[tuple]:
    pts = sorted({tuple(p) for p in points})
    if len(pts) == 1:
        return pts
    return [pts[i] for i in vertex_indices(pts)]


@dataclass(frozen=True)
class NefPartition:
    """Partition A_1, ..., A_{k+1} of the vertices of a reflexive polytope.

    φ_j is -1 on A_j and 0 on the other vertices, extended linearly over the
    cones on the faces of Δ.  An empty last part encodes Δ_{k+1} = {0}.
    """

    polytope: LatticePolytope
    parts: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        parts = tuple(tuple(sorted(int(i) for i in p)) for p in self.parts)
        object.__setattr__(self, "parts", parts)
        flat = sorted(i for p in parts for i in p)
        if flat != list(range(len(self.polytope.vertices))):
            raise ConstructionError("parts must partition the vertex set")

    @property
    def k(self) -> int:
        return len(self.parts) - 1

    def vertex_phi(self, j: int, v: int) -> int:
        return -1 if v in self.parts[j] else 0

    def part_polytope(self, j: int) -> list[tuple[int, ...]]:
        """Vertices of Δ_j = Conv(A_j ∪ {0})."""
        pts = [self.polytope.vertices[i] for i in self.parts[j]] + [(0,) * self.polytope.rank]
        return _hull_vertices(pts)

    @cached_property
    def dual_parts(self) -> list[list[tuple[int, ...]]]:
        """Vertices of Δ̌_j = {n : <n, m> >= φ_j(m)}."""
        d = self.polytope.rank
        out = []
        for j in range(len(self.parts)):
            ineqs = [(tuple(Fraction(x) for x in v), Fraction(self.vertex_phi(j, i))) for i, v in enumerate(self.polytope.vertices)]
            verts = vertices_from_halfspaces(ineqs, d)
            if any(x.denominator != 1 for v in verts for x in v):
                raise ConstructionError(f"Δ̌_{j + 1} is not a lattice polytope")
            out.append([tuple(int(x) for x in v) for v in verts])
        return out

    def phi(self, j: int, m: Sequence[int]) -> int:
        """φ_j(m) = min over Δ̌_j of <n, m> (the Σ_Δ-linear extension)."""
        return min(dot(n, m) for n in self.dual_parts[j])

    def lattice_points(self) -> list[tuple[int, ...]]:
        """∪_j Δ_{j} ∩ M, the points used by the Cayley ray recipe."""
        out = set()
        for j in range(len(self.parts)):
            verts = self.part_polytope(j)
            out.update(_polytope_lattice_points(verts))
        return sorted(out)

    def validate(self) -> list[str]:
        errs = []
        P = self.polytope
        try:
            polar_dual(P)
        except ConstructionError as e:
            errs.append(f"polytope is not reflexive: {e}")
            return errs
        try:
            self.dual_parts
        except ConstructionError as e:
            return [str(e)]
        for j in range(len(self.parts)):
            for i, v in enumerate(P.vertices):
                if self.phi(j, v) != self.vertex_phi(j, i):
                    errs.append(f"φ_{j + 1} is not convex at vertex {i}")
            for normal, off, F in P.facets:
                pts = [list(P.vertices[i]) for i in sorted(F)]
                vals = [self.vertex_phi(j, i) for i in sorted(F)]
                if _linear_fit(pts, vals) is None:
                    errs.append(f"φ_{j + 1} is not linear on the cone over facet {sorted(F)}")
        return errs


def _linear_fit(pts, vals):
    from .linalg import solve

    return solve(pts, vals)


def _polytope_lattice_points(verts: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """Lattice points of a possibly lower-dimensional lattice polytope."""
    if len(verts) == 1:
        return [tuple(verts[0])]
    d = len(verts[0])
    if rank([[a - b for a, b in zip(v, verts[0])] for v in verts[1:]]) == d:
        return lattice_points(verts)
    from itertools import product

    from .polyhedra import affine_coordinates, _facets_full

    lo = [min(v[i] for v in verts) for i in range(d)]
    hi = [max(v[i] for v in verts) for i in range(d)]
    out = []
    for p in product(*(range(lo[i], hi[i] + 1) for i in range(d))):
        coords, s = affine_coordinates(list(verts) + [p])
        if coords[-1] is None:
            continue
        base_coords, s0 = affine_coordinates(list(verts))
        if s != s0:
            continue
        F = _facets_full(coords[:-1], s)
        x = coords[-1]
        if all(sum(a * b for a, b in zip(n, x)) >= off for n, off, _ in F):
            out.append(tuple(p))
    return out


def dual_nef_partition(np: NefPartition) -> NefPartition:
    """Borisov dual: Δ̌ = Conv(Δ̌_1, ..., Δ̌_{k+1}) with Ǎ_j = vertices in Δ̌_j."""
    errs = np.validate()
    if errs:
        raise ConstructionError("input is not a nef partition: " + "; ".join(errs))
    all_pts = [p for part in np.dual_parts for p in part]
    verts = _hull_vertices(all_pts)
    dual_poly = LatticePolytope(tuple(verts))
    parts: list[list[int]] = [[] for _ in np.dual_parts]
    for i, v in enumerate(dual_poly.vertices):
        owners = [j for j, part in enumerate(np.dual_parts) if v in part]
        if len(owners) != 1:
            raise ConstructionError(f"vertex {v} of Δ̌ lies in {len(owners)} of the Δ̌_j")
        parts[owners[0]].append(i)
    out = NefPartition(dual_poly, tuple(tuple(p) for p in parts))
    errs = out.validate()
    if errs:
        raise ConstructionError("dual is not a nef partition: " + "; ".join(errs))
    for j in range(len(parts)):
        for i, n in enumerate(dual_poly.vertices):
            m_min = min(dot(m, n) for m in np.part_polytope(j))
            if m_min != out.vertex_phi(j, i):
                raise ConstructionError("Borisov duality check failed")
    return out


# -- triangulations and Cayley fans -------------------------------------------


def pulling_triangulation(points: Sequence[Sequence[int]], base: Sequence[int] | int | None) -> RegularSubdivision:
    """Coherent star triangulation at ``base`` using every point as a vertex.

    Heights are 0 at the base and M + q(p) elsewhere, where q is a scaled
    squared distance plus a lexicographic tie-break; M and the scale grow
    until the resulting lower hull is certified to be a star triangulation
    with all points as vertices.  With ``base=None`` no point is pulled and
    the result is a fine regular triangulation (not necessarily a star).
    """
    pts = [tuple(int(x) for x in p) for p in points]
    star = base is not None
    if base is None:
        b = pts.index((0,) * len(pts[0])) if (0,) * len(pts[0]) in pts else 0
    elif isinstance(base, int):
        b = base
    else:
        b = pts.index(tuple(base))
    n = len(pts)
    shift = [tuple(x - y for x, y in zip(p, pts[b])) for p in pts]
    order = [shift[b]] + [p for i, p in enumerate(shift) if i != b]
    index_map = [b] + [i for i in range(n) if i != b]
    scale, M = 2 ** (n + 1), 1
    for _ in range(20):
        q = [scale * sum(x * x for x in p) + 2**i for i, p in enumerate(order)]
        M = max(M, 2 * max(q) + 1)
        if star:
            hs = [Fraction(0)] + [Fraction(M + qi) for qi in q[1:]]
        else:
            hs = [Fraction(0)] + [Fraction(qi - q[0]) for qi in q[1:]]
        sd = regular_subdivision(HeightedPoints(tuple(order), tuple(hs)))
        used = {i for c in sd.cells for i in c}
        if star and not sd.is_star(0):
            M *= 4
            continue
        if not sd.is_triangulation() or len(used) != n:
            scale *= 16
            continue
        # express the result in the caller's point order (shifted back)
        cells = [tuple(sorted(index_map[i] for i in c)) for c in sd.cells]
        heights = [Fraction(0)] * n
        for local, h in enumerate(hs):
            heights[index_map[local]] = h
        hp = HeightedPoints(tuple(shift), tuple(heights))
        out = regular_subdivision(hp)
        assert sorted(out.cells) == sorted(cells)
        return out
    raise ConstructionError("could not find a pulling triangulation (degenerate point set?)")


def cayley_fan(np: NefPartition, open_: bool = False) -> StackyFan:
    """Fan of the total space of ⊕ O(-E_j) over the refined spanning fan of Δ.

    Rays are (ρ, -φ_1(ρ), ..., -φ_k(ρ)) for nonzero lattice points ρ of the
    Δ_j and (0, e_j); with ``open_`` the rays coming from Δ_{k+1} are removed.
    """
    d, k = np.polytope.rank, np.k
    pts = np.lattice_points()
    zero = (0,) * d
    if zero not in pts:
        pts = [zero] + pts
    sd = pulling_triangulation(pts, zero)
    o = pts.index(zero)
    rays: list[tuple[int, ...]] = []
    ray_of: dict[int, int] = {}
    removed = set()
    for i, p in enumerate(pts):
        if i == o:
            continue
        lift = tuple(-np.phi(j, p) for j in range(k))
        ray_of[i] = len(rays)
        rays.append(tuple(p) + lift)
        if not any(lift):
            removed.add(len(rays) - 1)
    e_rays = []
    for j in range(k):
        e_rays.append(len(rays))
        rays.append(zero + tuple(int(i == j) for i in range(k)))
    cones = set()
    for cell in sd.cells:
        c = tuple(sorted([ray_of[i] for i in cell if i != o] + e_rays))
        if open_:
            c = tuple(r for r in c if r not in removed)
        cones.add(c)
    maximal = [c for c in cones if not any(set(c) < set(o2) for o2 in cones)]
    keep = sorted({r for c in maximal for r in c})
    renum = {r: i for i, r in enumerate(keep)}
    return StackyFan(
        d + k,
        tuple(rays[r] for r in keep),
        (),
        tuple(tuple(renum[r] for r in c) for c in sorted(maximal)),
    )


Variant = Literal["compact", "open-space", "open-both"]


def cayley_pair(np: NefPartition, variant: Variant = "compact") -> ClarkePair:
    """Clarke pair of Cayley fans attached to a nef partition and its dual.

    compact: (Σ_A, Σ°_Ǎ); open-space: (Σ°_A, Σ_Ǎ); open-both: (Σ°_A, Σ°_Ǎ).
    """
    dual = dual_nef_partition(np)
    if variant == "compact":
        pair = ClarkePair(cayley_fan(np, False), cayley_fan(dual, True))
    elif variant == "open-space":
        pair = ClarkePair(cayley_fan(np, True), cayley_fan(dual, False))
    elif variant == "open-both":
        pair = ClarkePair(cayley_fan(np, True), cayley_fan(dual, True))
    else:
        raise ValueError(f"unknown variant {variant!r}")
    errs = pair.validate()
    if errs:
        raise ConstructionError("Cayley pair failed validation: " + "; ".join(map(str, errs)))
    return pair


# -- stacky hypersurfaces -----------------------------------------------------


def stacky_hypersurface_pair(f: StackyFan, phi: Sequence[int]) -> ClarkePair:
    """Pair (Σ_L, Σ̌_L) for a nef line bundle L with support values ``phi``.

    Σ_L has rays (ρ, φ(ρ)) and (0, 1), the latter with weight min φ;
    Σ̌_L is the cone over P × {1}, P = {n : <n, ρ> >= -φ(ρ)}, triangulated
    by a regular triangulation using every lattice point of P (pulled at
    the origin when that is possible, otherwise a fine one).
    """
    bad = validate_fan(f)
    if bad:
        raise ConstructionError("invalid fan: " + "; ".join(map(str, bad)))
    phi = [int(x) for x in phi]
    if len(phi) != len(f.rays):
        raise ConstructionError("one support value per ray is required")
    if any(v < 1 for v in phi):
        raise ConstructionError("support values must be at least 1")
    if any(w != 1 for w in f.weights):
        raise ConstructionError("base fan must be unimodular")
    for c in f.max_cones:
        if c and abs(_det_or_index(f, c)) != 1:
            raise ConstructionError(f"cone {list(c)} is not unimodular")
    d = f.rank
    ineqs = [(tuple(Fraction(x) for x in r), Fraction(-v)) for r, v in zip(f.rays, phi)]
    verts = vertices_from_halfspaces(ineqs, d)
    if any(x.denominator != 1 for v in verts for x in v):
        raise ConstructionError("P_L is not a lattice polytope")
    verts = [tuple(int(x) for x in v) for v in verts]
    pts = lattice_points(verts)
    beta = min(phi)
    rays = [tuple(r) + (v,) for r, v in zip(f.rays, phi)] + [(0,) * d + (1,)]
    weights = [1] * len(f.rays) + [beta]
    top = len(f.rays)
    cones = [tuple(sorted(c + (top,))) for c in f.max_cones]
    sigma_L = StackyFan(d + 1, tuple(rays), tuple(weights), tuple(cones))
    try:
        sd = pulling_triangulation(pts, (0,) * d)
    except ConstructionError:
        sd = pulling_triangulation(pts, None)
    sigma_check = StackyFan(
        d + 1,
        tuple(tuple(p) + (1,) for p in pts),
        (),
        tuple(tuple(c) for c in sd.cells),
    )
    return ClarkePair(sigma_L, sigma_check)


def _det_or_index(f: StackyFan, c) -> int:
    from .linalg import elementary_divisors

    prod = 1
    for e in elementary_divisors([list(f.rays[i]) for i in c]):
        prod *= e
    return prod


def anticanonical_phi(f: StackyFan) -> list[int]:
    return [1] * len(f.rays)


__all__ = [
    "BHKData",
    "ConstructionError",
    "LatticePolytope",
    "NefPartition",
    "NotReflexive",
    "bhk_factorization",
    "bhk_pair",
    "cayley_fan",
    "cayley_pair",
    "dual_nef_partition",
    "maximal_group",
    "polar_dual",
    "pulling_triangulation",
    "stacky_hypersurface_pair",
    "weak_fano_pair",
]

