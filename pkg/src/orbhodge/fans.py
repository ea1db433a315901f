"""Simplicial stacky fans and the predicates defining a Clarke dual pair."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from math import gcd, lcm
from typing import Sequence

from .linalg import dot, rank, relative_volume, smith_normal_form, solve, transpose
from .polyhedra import fm_solve, hull_volume
from .sheaf import FinitePoset

Cone = tuple[int, ...]


@dataclass(frozen=True)
class StackyFan:
    """A simplicial fan with a positive weight on every ray.

    ``max_cones`` hold sorted ray indices.  The trivial fan {0} has no rays
    and the single maximal cone ``()``.
    """

    rank: int
    rays: tuple[tuple[int, ...], ...]
    weights: tuple[int, ...] = ()
    max_cones: tuple[Cone, ...] = ((),)

    def __post_init__(self):
        rays = tuple(tuple(int(x) for x in r) for r in self.rays)
        weights = tuple(int(w) for w in self.weights) if self.weights else (1,) * len(rays)
        cones = tuple(sorted({tuple(sorted(int(i) for i in c)) for c in self.max_cones}))
        if not cones:
            cones = ((),)
        object.__setattr__(self, "rays", rays)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "max_cones", cones)

    @classmethod
    def trivial(cls, rank: int) -> "StackyFan":
        return cls(rank, (), (), ((),))

    def is_trivial(self) -> bool:
        return not self.rays

    def scaled(self, i: int) -> tuple[int, ...]:
        return tuple(self.weights[i] * x for x in self.rays[i])

    def generators(self, cone: Cone) -> list[tuple[int, ...]]:
        """Scaled generators β_ρ·ρ of a cone, in ray order."""
        return [self.scaled(i) for i in cone]

    def primitive_generators(self, cone: Cone) -> list[tuple[int, ...]]:
        return [self.rays[i] for i in cone]

    @cached_property
    def cones(self) -> list[Cone]:
        """All cones (faces of maximal cones), sorted by dimension then rays."""
        out = set()
        for c in self.max_cones:
            for k in range(len(c) + 1):
                out.update(combinations(c, k))
        return sorted(out, key=lambda c: (len(c), c))

    def support_dim(self) -> int:
        return rank([list(r) for r in self.rays]) if self.rays else 0

    def canonical(self) -> tuple:
        """Label-free form: weighted rays and cones as sets of ray vectors."""
        rays = frozenset(zip(self.rays, self.weights))
        cones = frozenset(frozenset(self.rays[i] for i in c) for c in self.max_cones)
        return self.rank, rays, cones

    def same_fan(self, other: "StackyFan") -> bool:
        return self.canonical() == other.canonical()

    def to_dict(self) -> dict:
        return {
            "rank": self.rank,
            "rays": [list(r) for r in self.rays],
            "weights": list(self.weights),
            "cones": [list(c) for c in self.max_cones],
        }


@dataclass(frozen=True)
class Violation:
    kind: str
    detail: str
    witness: tuple = field(default=())

    def __str__(self) -> str:
        return f"{self.kind}: {self.detail}"


def _cones_meet_in_face(f: StackyFan, s: Cone, t: Cone) -> bool:
    """Whether cone(s) ∩ cone(t) is the common face spanned by s ∩ t.

    Searches (exactly) for a point written with nonnegative coefficients in
    both cones that uses a ray outside the common face.
    """
    only_s = [i for i in s if i not in t]
    only_t = [i for i in t if i not in s]
    if not only_s and not only_t:
        return True
    rays = [f.rays[i] for i in s] + [f.rays[i] for i in t]
    if rank([list(r) for r in rays]) == len(set(s) | set(t)):
        return True
    n = len(s) + len(t)
    ineqs = []
    for j in range(n):
        ineqs.append((tuple(Fraction(int(k == j)) for k in range(n)), Fraction(0)))
    for coord in range(f.rank):
        row = tuple(Fraction(f.rays[i][coord]) for i in s) + tuple(Fraction(-f.rays[i][coord]) for i in t)
        ineqs.append((row, Fraction(0)))
        ineqs.append((tuple(-x for x in row), Fraction(0)))
    marker = tuple(Fraction(int(i in only_s)) for i in s) + tuple(Fraction(int(i in only_t)) for i in t)
    ineqs.append((marker, Fraction(1)))
    return fm_solve(ineqs, n) is None


def validate_fan(f: StackyFan) -> list[Violation]:
    """All violations of the stacky fan axioms (empty list means valid)."""
    out: list[Violation] = []
    if len(f.weights) != len(f.rays):
        out.append(Violation("weights", "weight count differs from ray count"))
    for i, r in enumerate(f.rays):
        if len(r) != f.rank:
            out.append(Violation("rank", f"ray {i} has length {len(r)}", (i,)))
            continue
        g = gcd(*r)
        if g == 0:
            out.append(Violation("zero-ray", f"ray {i} is zero", (i,)))
        elif g != 1:
            out.append(Violation("primitive", f"ray {i} = {list(r)} is not primitive", (i,)))
    for i, w in enumerate(f.weights):
        if w <= 0:
            out.append(Violation("weight", f"ray {i} has nonpositive weight {w}", (i,)))
    if out:
        return out
    for c in f.max_cones:
        if any(i < 0 or i >= len(f.rays) for i in c):
            out.append(Violation("index", f"cone {list(c)} refers to a missing ray", c))
            continue
        if c and rank([list(f.rays[i]) for i in c]) < len(c):
            out.append(Violation("simplicial", f"cone {list(c)} is not simplicial", c))
    used = {i for c in f.max_cones for i in c}
    for i in range(len(f.rays)):
        if i not in used:
            out.append(Violation("unused-ray", f"ray {i} lies in no cone", (i,)))
    if out:
        return out
    for s, t in combinations(f.max_cones, 2):
        if set(s) <= set(t) or set(t) <= set(s):
            out.append(Violation("redundant", f"cone {list(s)} is contained in {list(t)}", (s, t)))
        elif not _cones_meet_in_face(f, s, t):
            out.append(Violation("intersection", f"cones {list(s)} and {list(t)} meet in a non-face", (s, t)))
    return out


def face_poset(f: StackyFan) -> FinitePoset:
    """Cones ordered by σ ⪯ σ' iff σ' is a face of σ."""
    cones = f.cones
    rel = [(s, t) for s in cones for t in cones if s != t and set(t) <= set(s)]
    return FinitePoset(cones, rel)


def is_gorenstein(f: StackyFan, cone: Cone) -> tuple[bool, tuple[int, ...] | None]:
    """Integral m_c with <β_ρ ρ, m_c> = 1 on every generator, if it exists."""
    gens = f.generators(cone)
    if not gens:
        return True, (0,) * f.rank
    U, S, V = smith_normal_form(gens)
    b = [sum(U[i][j] for j in range(len(gens))) for i in range(len(gens))]
    y = [0] * f.rank
    for i in range(len(gens)):
        s = S[i][i] if i < f.rank else 0
        if s == 0:
            if b[i] != 0:
                return False, None
            continue
        if b[i] % s:
            return False, None
        y[i] = b[i] // s
    m = tuple(sum(V[i][j] * y[j] for j in range(f.rank)) for i in range(f.rank))
    assert all(dot(g, m) == 1 for g in gens)
    return True, m


@dataclass(frozen=True)
class SupportFunction:
    values: tuple[int, ...]

    def __call__(self, f: StackyFan, cone: Cone, point: Sequence) -> Fraction:
        """Evaluate the piecewise-linear extension at a point of ``cone``."""
        gens = [f.rays[i] for i in cone]
        a = solve(transpose(gens), list(point)) if gens else []
        if a is None:
            raise ValueError("point not in the span of the cone")
        return sum((ai * self.values[i] for ai, i in zip(a, cone)), Fraction(0))


def walls(f: StackyFan) -> list[tuple[Cone, Cone, int, int, list[Fraction]]]:
    """Walls (s, t, u, v, a): s, t share a facet, u ∈ s and v ∈ t off the wall,
    and a expresses v in the rays of s."""
    out = []
    for s, t in combinations(f.max_cones, 2):
        common = set(s) & set(t)
        if len(s) != len(t) or len(common) != len(s) - 1:
            continue
        (u,) = set(s) - common
        (v,) = set(t) - common
        a = solve(transpose([f.rays[i] for i in s]), list(f.rays[v]))
        if a is None:
            continue
        out.append((s, t, u, v, a))
    return out


def _wall_forms(f: StackyFan) -> list[tuple[Fraction, ...]]:
    forms = []
    for s, _, _, v, a in walls(f):
        row = [Fraction(0)] * len(f.rays)
        row[v] += 1
        for coef, i in zip(a, s):
            row[i] -= coef
        forms.append(tuple(row))
    return forms


def check_support_function(f: StackyFan, phi: SupportFunction, strict: bool) -> bool:
    """Wall-by-wall convexity test of the piecewise-linear extension of ``phi``."""
    for row in _wall_forms(f):
        val = sum(c * x for c, x in zip(row, phi.values))
        if val < 0 or (strict and val == 0):
            return False
    return True


def find_support_function(f: StackyFan, strict: bool = True) -> SupportFunction | None:
    """Integral ray values whose extension is (strictly) convex, or None."""
    n = len(f.rays)
    if not strict:
        return SupportFunction((0,) * n)
    for candidate in ((1,) * n, (0,) * n):
        phi = SupportFunction(candidate)
        if check_support_function(f, phi, strict=True):
            return phi
    forms = _wall_forms(f)
    x = fm_solve([(row, Fraction(1)) for row in forms], n)
    if x is None:
        return None
    den = lcm(*(v.denominator for v in x)) if x else 1
    phi = SupportFunction(tuple(int(v * den) for v in x))
    assert check_support_function(f, phi, strict=True)
    return phi


def delta_simplices(f: StackyFan) -> list[list[tuple[int, ...]]]:
    """Vertex lists [0, β_ρ ρ, ...] of the simplices Δ_c over maximal cones."""
    zero = (0,) * f.rank
    return [[zero] + f.generators(c) for c in f.max_cones]


def delta_volume(f: StackyFan) -> int:
    """Σ over maximal cones of the normalized volume of Δ_c."""
    return sum(relative_volume(s) for s in delta_simplices(f))


def convexity_check(f: StackyFan) -> bool:
    """Whether Δ_Σ, the union of the Δ_c, is a convex polytope."""
    if f.is_trivial():
        return True
    dim = f.support_dim()
    if any(len(c) != dim for c in f.max_cones):
        return False
    points = [(0,) * f.rank] + [f.scaled(i) for i in range(len(f.rays))]
    return delta_volume(f) == hull_volume(points)


def regularity_check(fanM: StackyFan, fanN: StackyFan) -> bool:
    """<ρ, ρ̌> >= 0 for every pair of rays."""
    if fanM.rank != fanN.rank:
        raise ValueError("fans have different ranks")
    return all(dot(r, s) >= 0 for r in fanM.rays for s in fanN.rays)


def is_quasiprojective(f: StackyFan) -> bool:
    return find_support_function(f, strict=True) is not None
