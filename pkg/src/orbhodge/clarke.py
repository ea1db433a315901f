"""Clarke dual pairs, the sheaves Ξ and Ξ̌, and their Hodge tables.

A pair consists of a stacky fan in M and one in N.  The orthogonal-pair
poset carries two bigraded sheaves.  The stalk of Ξ at (c, č) is

    ⊕ (∧^{a - dim č} c^⊥) ∧ Vol(L(č)) ⊗ B_c ⊗ B_č      inside ∧^a N_Q,

and Ξ̌ swaps the roles of the two fans and lives in ∧^a M_Q.  A basis vector
with box ages b (own fan) and l (other fan) sits in bidegree
(a + b - l, b + l).  Restrictions are ambient inclusions of wedge subspaces
tensored with support-rule box projections.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Literal

from .boxes import BoxSpace
from .fans import (
    Cone,
    StackyFan,
    Violation,
    convexity_check,
    find_support_function,
    regularity_check,
    validate_fan,
)
from .linalg import dot
from .sheaf import FinitePoset, GradedSheaf, cohomology
from .stalks import Stalk, StalkSpec, TensorSheaf, make_stalk

Side = Literal["space", "mirror"]
Bidegree = tuple[Fraction, Fraction]


class HodgeTable(dict):
    """Finite map (λ, μ) -> dimension with rational bidegrees."""

    @classmethod
    def from_items(cls, items: Iterable[tuple[tuple, int]]) -> "HodgeTable":
        t = cls()
        for (lam, mu), v in items:
            if v:
                key = (Fraction(lam), Fraction(mu))
                t[key] = t.get(key, 0) + v
        return t

    def rows(self) -> list[tuple[Fraction, Fraction, int]]:
        return [(lam, mu, v) for (lam, mu), v in sorted(self.items()) if v]

    def total(self) -> int:
        return sum(self.values())


@dataclass(frozen=True)
class ClarkePair:
    fanM: StackyFan
    fanN: StackyFan

    def __post_init__(self):
        if self.fanM.rank != self.fanN.rank:
            raise ValueError("fans of a Clarke pair must have equal rank")

    @property
    def rank(self) -> int:
        return self.fanM.rank

    def validate(self, strict: bool = False) -> list[Violation]:
        out = [Violation("sigma." + v.kind, v.detail, v.witness) for v in validate_fan(self.fanM)]
        out += [Violation("sigma_check." + v.kind, v.detail, v.witness) for v in validate_fan(self.fanN)]
        if out:
            return out
        if not regularity_check(self.fanM, self.fanN):
            bad = next((i, j) for i, r in enumerate(self.fanM.rays) for j, s in enumerate(self.fanN.rays) if dot(r, s) < 0)
            out.append(Violation("regularity", f"<ray {bad[0]}, ray {bad[1]}> < 0", bad))
        if strict:
            for name, f in (("sigma", self.fanM), ("sigma_check", self.fanN)):
                if not convexity_check(f):
                    out.append(Violation(name + ".convexity", "Δ is not convex"))
                if find_support_function(f, strict=True) is None:
                    out.append(Violation(name + ".quasiprojective", "no strictly convex support function"))
        return out

    @cached_property
    def poset(self) -> "PairPoset":
        return pair_poset(self)


@dataclass
class PairPoset:
    pair: ClarkePair
    elements: list[tuple[Cone, Cone]]
    poset: FinitePoset

    def __len__(self) -> int:
        return len(self.elements)


def orthogonal(fanM: StackyFan, c: Cone, fanN: StackyFan, cc: Cone) -> bool:
    return all(dot(fanM.rays[i], fanN.rays[j]) == 0 for i in c for j in cc)


def pair_poset(pair: ClarkePair) -> PairPoset:
    """The poset (Σ ⊕ Σ̌)_0 of orthogonal pairs of cones."""
    if not regularity_check(pair.fanM, pair.fanN):
        raise ValueError("pair is not regular")
    elems = [(c, cc) for c in pair.fanM.cones for cc in pair.fanN.cones if orthogonal(pair.fanM, c, pair.fanN, cc)]

    def less(x, y):
        return x != y and set(y[0]) <= set(x[0]) and set(y[1]) <= set(x[1])

    return PairPoset(pair, elems, FinitePoset.from_order(elems, less))


# -- stalks -------------------------------------------------------------------


class _SheafBuilder:
    """Assembles Ξ (side 'space') or Ξ̌ (side 'mirror') on the pair poset."""

    def __init__(self, pair: ClarkePair, side: Side):
        if side not in ("space", "mirror"):
            raise ValueError(f"unknown side {side!r}")
        self.pair = pair
        self.side = side
        self.d = pair.rank
        self.pp = pair.poset
        self._boxes: dict[tuple[int, Cone], BoxSpace] = {}
        self.stalks = [self._stalk(x) for x in self.pp.elements]
        self.tensor = TensorSheaf(self.pp.poset, self.stalks)

    def box(self, which: int, cone: Cone) -> BoxSpace:
        key = (which, cone)
        if key not in self._boxes:
            f = self.pair.fanM if which == 0 else self.pair.fanN
            self._boxes[key] = BoxSpace(cone, f.generators(cone), self.d)
        return self._boxes[key]

    def _stalk(self, x: tuple[Cone, Cone]) -> Stalk:
        c, cc = x
        fM, fN = self.pair.fanM, self.pair.fanN
        B1, B2 = self.box(0, c), self.box(1, cc)
        if self.side == "space":
            spec = StalkSpec(fM.primitive_generators(c), fN.primitive_generators(cc), B1, B2)
            return make_stalk(x, spec, self.d, lambda a, b, l: (a + b - l, b + l))
        spec = StalkSpec(fN.primitive_generators(cc), fM.primitive_generators(c), B1, B2)
        return make_stalk(x, spec, self.d, lambda a, l, b: (a + b - l, b + l))

    def restriction(self, xi: int, yi: int) -> dict[tuple[int, int], Fraction]:
        return self.tensor.restriction(xi, yi)

    def sheaf(self) -> GradedSheaf:
        return self.tensor.sheaf()


def _side_of(side: str) -> Side:
    aliases = {"space": "space", "xi": "space", "mirror": "mirror", "xicheck": "mirror"}
    if side not in aliases:
        raise ValueError(f"unknown side {side!r}")
    return aliases[side]  # type: ignore[return-value]


def xi_stalk(pair: ClarkePair, element: tuple[Cone, Cone], side: str = "space") -> Stalk:
    b = _SheafBuilder(pair, _side_of(side))
    return b.stalks[pair.poset.poset.index[element]]


def xi_restriction(pair: ClarkePair, x: tuple[Cone, Cone], y: tuple[Cone, Cone], side: str = "space") -> dict[tuple[int, int], Fraction]:
    b = _SheafBuilder(pair, _side_of(side))
    P = pair.poset.poset
    i, j = P.index[x], P.index[y]
    if i == j:
        return {(k, k): Fraction(1) for k in range(len(b.stalks[i].labels))}
    if not P.less(i, j):
        raise ValueError("elements are not comparable")
    return b.restriction(i, j)


def build_sheaf(pair: ClarkePair, side: str = "space") -> GradedSheaf:
    return _SheafBuilder(pair, _side_of(side)).sheaf()


def table_from_cohomology(H: dict) -> HodgeTable:
    """f^{λ,μ} = Σ_n dim H^n(F^{λ, μ-n})."""
    return HodgeTable.from_items(((lam, mu + n), h) for (n, (lam, mu)), h in H.items())


def hodge_table(pair: ClarkePair, side: str = "space", jobs: int = 1) -> HodgeTable:
    """Orbifold Hodge table of the space (Ξ) or mirror (Ξ̌) side."""
    return table_from_cohomology(cohomology(build_sheaf(pair, side), jobs=jobs))


@dataclass
class DualityReport:
    passed: bool
    space: HodgeTable
    mirror: HodgeTable
    table_mismatches: list[tuple[Bidegree, int, int]]
    stalk_mismatches: list[tuple[tuple[Cone, Cone], Bidegree]]

    def summary(self) -> str:
        if self.passed:
            return "duality holds"
        parts = [f"f_space{b} = {u} but f_mirror at dual bidegree = {v}" for b, u, v in self.table_mismatches]
        parts += [f"stalk {e} differs at {b}" for e, b in self.stalk_mismatches]
        return "; ".join(parts)


def duality_check(pair: ClarkePair, jobs: int = 1) -> DualityReport:
    """Table duality f_space[λ,μ] = f_mirror[d-λ,μ] plus its stalkwise version."""
    d = pair.rank
    bs, bm = _SheafBuilder(pair, "space"), _SheafBuilder(pair, "mirror")
    stalk_bad = []
    for X, Y in zip(bs.stalks, bm.stalks):
        dx, dy = X.dims(), Y.dims()
        for (lam, mu) in sorted(set(dx) | {(d - l, m) for l, m in dy}):
            if dx.get((lam, mu), 0) != dy.get((d - lam, mu), 0):
                stalk_bad.append((X.element, (lam, mu)))
    space = table_from_cohomology(cohomology(bs.sheaf(), jobs=jobs))
    mirror = table_from_cohomology(cohomology(bm.sheaf(), jobs=jobs))
    bad = []
    for (lam, mu) in sorted(set(space) | {(d - l, m) for l, m in mirror}):
        u, v = space.get((lam, mu), 0), mirror.get((d - lam, mu), 0)
        if u != v:
            bad.append(((lam, mu), u, v))
    return DualityReport(not bad and not stalk_bad, space, mirror, bad, stalk_bad)


def integer_graded_table(t: dict) -> HodgeTable:
    return HodgeTable.from_items(
        ((l, m), v) for (l, m), v in t.items() if Fraction(l).denominator == 1 and Fraction(m).denominator == 1
    )


def cayley_regrade(t: dict, k: int) -> HodgeTable:
    """Move the entry at (λ, μ) to (λ - k, μ - k)."""
    if k < 0:
        raise ValueError("codimension must be nonnegative")
    return HodgeTable.from_items(((Fraction(l) - k, Fraction(m) - k), v) for (l, m), v in t.items())


def dual_table(t: dict, d: int) -> HodgeTable:
    return HodgeTable.from_items(((d - Fraction(l), Fraction(m)), v) for (l, m), v in t.items())
