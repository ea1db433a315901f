"""Box elements of stacky simplicial cones and their age-graded spaces."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import floor
from typing import Sequence

from .linalg import inverse, rank, smith_normal_form, solve, transpose


@dataclass(frozen=True, order=True)
class BoxElement:
    point: tuple[int, ...]
    coeffs: tuple[Fraction, ...]
    age: Fraction

    def support(self) -> tuple[int, ...]:
        """Positions (in generator order) with nonzero coefficient."""
        return tuple(i for i, a in enumerate(self.coeffs) if a)


def _coefficients(gens: Sequence[Sequence[int]], point: Sequence[int]) -> list[Fraction] | None:
    if not gens:
        return [] if not any(point) else None
    return solve(transpose(gens), list(point))


def _element(gens: Sequence[Sequence[int]], coeffs: Sequence[Fraction], d: int) -> BoxElement:
    point = [Fraction(0)] * d
    for a, g in zip(coeffs, gens):
        for i in range(d):
            point[i] += a * g[i]
    return BoxElement(tuple(int(x) for x in point), tuple(coeffs), sum(coeffs, Fraction(0)))


def box_elements(gens: Sequence[Sequence[int]], interior_only: bool = False, d: int | None = None) -> list[BoxElement]:
    """Box (or open box) of the simplicial cone with scaled generators ``gens``.

    Coset representatives of (span ∩ Z^d) / Z<gens> come from the Smith form
    of the generator matrix; each is reduced to its canonical representative
    with coefficients in [0, 1).
    """
    gens = [tuple(int(x) for x in g) for g in gens]
    if d is None:
        if not gens:
            raise ValueError("ambient rank required for the zero cone")
        d = len(gens[0])
    r = len(gens)
    if r == 0:
        return [] if interior_only else [BoxElement((0,) * d, (), Fraction(0))]
    if rank(gens) < r:
        raise ValueError("cone is not simplicial")
    U, S, _ = smith_normal_form(transpose(gens))
    Uinv = [[int(x) for x in row] for row in inverse(U)]
    divisors = [S[i][i] for i in range(r)]
    out = []
    for y in product(*(range(s) for s in divisors)):
        full = list(y) + [0] * (d - r)
        p = [sum(Uinv[i][j] * full[j] for j in range(d)) for i in range(d)]
        a = _coefficients(gens, p)
        frac = [x - floor(x) for x in a]
        if interior_only and not all(frac):
            continue
        out.append(_element(gens, frac, d))
    return sorted(out)


def brute_force_box(gens: Sequence[Sequence[int]], interior_only: bool = False, d: int | None = None) -> list[BoxElement]:
    """Independent oracle: scan the bounding box of the half-open parallelepiped."""
    gens = [tuple(int(x) for x in g) for g in gens]
    if d is None:
        d = len(gens[0])
    if not gens:
        return [] if interior_only else [BoxElement((0,) * d, (), Fraction(0))]
    lo = [sum(min(0, g[i]) for g in gens) for i in range(d)]
    hi = [sum(max(0, g[i]) for g in gens) for i in range(d)]
    out = []
    for p in product(*(range(lo[i], hi[i] + 1) for i in range(d))):
        a = _coefficients(gens, p)
        if a is None or not all(0 <= x < 1 for x in a):
            continue
        if interior_only and not all(a):
            continue
        out.append(BoxElement(tuple(p), tuple(a), sum(a, Fraction(0))))
    return sorted(out)


class BoxSpace:
    """Age-graded space with basis the box elements of one stacky cone.

    ``rays`` are global ray labels parallel to ``gens``; projections to faces
    are expressed with those labels.
    """

    def __init__(self, rays: Sequence[int], gens: Sequence[Sequence[int]], d: int):
        self.rays = tuple(rays)
        self.gens = tuple(tuple(g) for g in gens)
        self.d = d
        self.basis = box_elements(self.gens, d=d)
        self._index = {b.point: i for i, b in enumerate(self.basis)}

    def __len__(self) -> int:
        return len(self.basis)

    @property
    def ages(self) -> list[Fraction]:
        return [b.age for b in self.basis]

    def index_of(self, point: Sequence[int]) -> int:
        return self._index[tuple(point)]

    def supported_on(self, i: int, face_rays: Sequence[int]) -> bool:
        face = set(face_rays)
        return all(self.rays[j] in face for j in self.basis[i].support())

    def projection(self, face: "BoxSpace") -> list[int | None]:
        """Support-rule projection onto the box space of a face.

        Basis element i goes to the same lattice point in ``face`` when all its
        coefficients on rays outside the face vanish, and to zero otherwise.
        """
        if not set(face.rays) <= set(self.rays):
            raise ValueError("not a face")
        out: list[int | None] = []
        for i, b in enumerate(self.basis):
            out.append(face.index_of(b.point) if self.supported_on(i, face.rays) else None)
        return out

    def filtration(self, p: int) -> list[int]:
        """Basis indices of F^p = sum of pieces of age at most dim - p."""
        return [i for i, b in enumerate(self.basis) if b.age <= len(self.rays) - p]
