"""Sheaves whose stalks are decorated wedge subspaces tensored with two box spaces.

Both Ξ/Ξ̌ on a Clarke pair poset and the tropical Jacobian sheaves have this
shape.  A stalk is

    ⊕_a (∧^{a - r} W) ∧ Vol(L) ⊗ B_1 ⊗ B_2

with W the annihilator of ``perp`` and L the span of the r ``volume``
vectors; restrictions include wedge subspaces coordinatewise inside ∧^a and
project box elements by the support rule.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Hashable, Sequence

from .boxes import BoxSpace
from .linalg import WedgeSubspace, decorated_wedge, express_in_basis
from .sheaf import FinitePoset, GradedSheaf

Bidegree = tuple[Fraction, Fraction]
Grading = Callable[[int, Fraction, Fraction], Bidegree]


@dataclass
class StalkSpec:
    perp: Sequence[Sequence[int]]
    volume: Sequence[Sequence[int]]
    box1: BoxSpace
    box2: BoxSpace


@dataclass
class Stalk:
    element: Hashable
    wedges: dict[int, WedgeSubspace]
    box1: BoxSpace
    box2: BoxSpace
    labels: list[tuple[int, int, int, int]] = field(default_factory=list)  # (a, wedge idx, box1 idx, box2 idx)
    degrees: list[Bidegree] = field(default_factory=list)

    def dims(self) -> dict[Bidegree, int]:
        out: dict[Bidegree, int] = defaultdict(int)
        for b in self.degrees:
            out[b] += 1
        return dict(out)


def make_stalk(element: Hashable, spec: StalkSpec, d: int, grading: Grading) -> Stalk:
    lo, hi = len(spec.volume), d - len(spec.perp)
    wedges = {a: decorated_wedge(spec.perp, spec.volume, a, d) for a in range(lo, hi + 1)}
    st = Stalk(element, wedges, spec.box1, spec.box2)
    for a, W in wedges.items():
        for w in range(W.dim):
            for i, g1 in enumerate(spec.box1.basis):
                for j, g2 in enumerate(spec.box2.basis):
                    st.labels.append((a, w, i, j))
                    st.degrees.append(grading(a, g1.age, g2.age))
    return st


class TensorSheaf:
    """Stalks plus restriction maps on a poset, packaged as a GradedSheaf."""

    def __init__(self, poset: FinitePoset, stalks: Sequence[Stalk]):
        self.poset = poset
        self.stalks = list(stalks)
        self._index = [{lab: k for k, lab in enumerate(s.labels)} for s in self.stalks]

    def restriction(self, xi: int, yi: int) -> dict[tuple[int, int], Fraction]:
        X, Y = self.stalks[xi], self.stalks[yi]
        p1 = X.box1.projection(Y.box1)
        p2 = X.box2.projection(Y.box2)
        incl = {a: express_in_basis(Y.wedges[a].basis, W.basis) for a, W in X.wedges.items() if W.dim}
        yidx = self._index[yi]
        out: dict[tuple[int, int], Fraction] = {}
        for col, (a, w, i, j) in enumerate(X.labels):
            i2, j2 = p1[i], p2[j]
            if i2 is None or j2 is None:
                continue
            M = incl[a]
            for w2 in range(len(M)):
                v = M[w2][w]
                if v:
                    out[(yidx[(a, w2, i2, j2)], col)] = v
        return out

    def sheaf(self) -> GradedSheaf:
        return GradedSheaf(self.poset, [s.degrees for s in self.stalks], self.restriction)
