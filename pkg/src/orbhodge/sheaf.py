"""Cohomology of sheaves on finite posets with the Alexandrov topology.

A sheaf is a functor on the poset: a finite-dimensional rational vector
space F(x) for every element and a restriction matrix F(x) -> F(y) whenever
x ≺ y.  Cohomology is computed with the derived-limit (nerve) complex

    C^n = ⊕_{x_0 ≺ ... ≺ x_n} F(x_n)

whose differential is the alternating sum of face maps; the last face uses
the restriction F(x_{n-1} -> x_n).  Every basis vector carries a bidegree
(λ, μ) and restrictions preserve it, so the complex splits into independent
bidegree blocks.
"""

from __future__ import annotations

from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import Callable, Hashable, Iterable, Sequence

from .linalg import sparse_rank

Bidegree = tuple[Fraction, Fraction]
SparseMap = dict[tuple[int, int], Fraction]  # (row in target, col in source) -> value


class FinitePoset:
    """Finite poset on ``elements`` given by strict relations x ≺ y."""

    def __init__(self, elements: Sequence[Hashable], relations: Iterable[tuple[Hashable, Hashable]]):
        self.elements = list(elements)
        self.index = {e: i for i, e in enumerate(self.elements)}
        if len(self.index) != len(self.elements):
            raise ValueError("duplicate poset elements")
        n = len(self.elements)
        succ: list[set[int]] = [set() for _ in range(n)]
        for x, y in relations:
            i, j = self.index[x], self.index[y]
            if i == j:
                raise ValueError("strict relation on a single element")
            succ[i].add(j)
        above: list[frozenset[int]] = [frozenset()] * n
        state = [0] * n

        def visit(i: int) -> frozenset[int]:
            if state[i] == 2:
                return above[i]
            if state[i] == 1:
                raise ValueError("relation has a cycle")
            state[i] = 1
            acc = set(succ[i])
            for j in succ[i]:
                acc |= visit(j)
            above[i] = frozenset(acc)
            state[i] = 2
            return above[i]

        for i in range(n):
            visit(i)
        self.above = above
        self._above_sorted = [sorted(a) for a in above]

    @classmethod
    def from_order(cls, elements: Sequence[Hashable], less: Callable[[Hashable, Hashable], bool]) -> "FinitePoset":
        rel = [(x, y) for x in elements for y in elements if x != y and less(x, y)]
        return cls(elements, rel)

    def __len__(self) -> int:
        return len(self.elements)

    def less(self, i: int, j: int) -> bool:
        return j in self.above[i]

    def leq(self, i: int, j: int) -> bool:
        return i == j or j in self.above[i]

    def up_set(self, i: int) -> list[int]:
        return [i] + self._above_sorted[i]

    def covers(self) -> list[tuple[int, int]]:
        out = []
        for i in range(len(self)):
            for j in self._above_sorted[i]:
                if not any(j in self.above[k] for k in self.above[i]):
                    out.append((i, j))
        return out

    def height(self) -> int:
        """Length of the longest strict chain (number of ≺ steps)."""
        memo: dict[int, int] = {}

        def h(i: int) -> int:
            if i not in memo:
                memo[i] = max((1 + h(j) for j in self.above[i]), default=0)
            return memo[i]

        return max((h(i) for i in range(len(self))), default=0)


def strict_chains(P: FinitePoset, n: int) -> list[tuple[int, ...]]:
    """All chains x_0 ≺ ... ≺ x_n (as index tuples) in lexicographic order."""
    if n < 0:
        return []
    out: list[tuple[int, ...]] = []

    def extend(chain: tuple[int, ...]) -> None:
        if len(chain) == n + 1:
            out.append(chain)
            return
        for j in P._above_sorted[chain[-1]]:
            extend(chain + (j,))

    for i in range(len(P)):
        extend((i,))
    return out


def compose(B: SparseMap, A: SparseMap) -> SparseMap:
    """Sparse product B·A."""
    by_row: dict[int, list[tuple[int, Fraction]]] = defaultdict(list)
    for (k, j), v in A.items():
        by_row[k].append((j, v))
    out: dict[tuple[int, int], Fraction] = defaultdict(Fraction)
    for (i, k), w in B.items():
        for j, v in by_row.get(k, ()):
            out[(i, j)] += w * v
    return {key: v for key, v in out.items() if v}


class GradedSheaf:
    """Sheaf of bigraded rational vector spaces on a finite poset.

    ``degrees[x]`` lists the bidegree of every basis vector of F(x);
    ``restriction(x, y)`` returns the sparse matrix of F(x) -> F(y) for x ≺ y.
    All restriction matrices are materialized eagerly so the sheaf is a plain
    immutable value that can be shipped to worker processes.
    """

    def __init__(self, poset: FinitePoset, degrees: Sequence[Sequence[Bidegree]], restriction: Callable[[int, int], SparseMap] | dict):
        self.poset = poset
        self.degrees = [list(d) for d in degrees]
        if isinstance(restriction, dict):
            self.maps = {k: dict(v) for k, v in restriction.items()}
        else:
            self.maps = {}
            for i in range(len(poset)):
                for j in poset._above_sorted[i]:
                    m = {k: Fraction(v) for k, v in restriction(i, j).items() if v}
                    self.maps[(i, j)] = m

    def dim(self, i: int) -> int:
        return len(self.degrees[i])

    def bidegrees(self) -> list[Bidegree]:
        return sorted({b for d in self.degrees for b in d})

    def stalk_dims(self, i: int) -> dict[Bidegree, int]:
        out: dict[Bidegree, int] = defaultdict(int)
        for b in self.degrees[i]:
            out[b] += 1
        return dict(out)

    def restriction(self, i: int, j: int) -> SparseMap:
        if i == j:
            return {(k, k): Fraction(1) for k in range(self.dim(i))}
        return self.maps[(i, j)]

    def grading_violations(self) -> list[tuple[int, int]]:
        bad = []
        for (i, j), m in self.maps.items():
            for (r, c) in m:
                if self.degrees[j][r] != self.degrees[i][c]:
                    bad.append((i, j))
                    break
        return bad

    def composition_violations(self) -> list[tuple[int, int, int]]:
        bad = []
        P = self.poset
        for i in range(len(P)):
            for j in P._above_sorted[i]:
                for k in P._above_sorted[j]:
                    if compose(self.maps[(j, k)], self.maps[(i, j)]) != self.maps[(i, k)]:
                        bad.append((i, j, k))
        return bad

    def restrict_to(self, indices: Sequence[int]) -> "GradedSheaf":
        """The sheaf restricted to a subposet (e.g. an open star)."""
        idx = list(indices)
        pos = {x: n for n, x in enumerate(idx)}
        sub = FinitePoset(idx, [(x, y) for x in idx for y in idx if self.poset.less(x, y)])
        maps = {(pos[x], pos[y]): self.maps[(x, y)] for x in idx for y in idx if self.poset.less(x, y)}
        return GradedSheaf(sub, [self.degrees[x] for x in idx], maps)


# -- the nerve complex --------------------------------------------------------


def _all_chains(P: FinitePoset) -> list[list[tuple[int, ...]]]:
    levels = []
    n = 0
    while True:
        ch = strict_chains(P, n)
        if not ch:
            break
        levels.append(ch)
        n += 1
    return levels


def _coboundaries(sheaf: GradedSheaf, chains: list[list[tuple[int, ...]]], b: Bidegree):
    """Cochain sizes and the sparse differentials d^n : C^n -> C^{n+1} in bidegree ``b``."""
    local = [{k: n for n, k in enumerate(k for k, d in enumerate(deg) if d == b)} for deg in sheaf.degrees]
    dims = [len(m) for m in local]
    offsets: list[dict[tuple[int, ...], int]] = []
    sizes: list[int] = []
    for level in chains:
        off: dict[tuple[int, ...], int] = {}
        total = 0
        for ch in level:
            if dims[ch[-1]]:
                off[ch] = total
                total += dims[ch[-1]]
        offsets.append(off)
        sizes.append(total)
    diffs: list[dict[tuple[int, int], Fraction]] = []
    for n in range(len(chains) - 1):
        src, dst = offsets[n], offsets[n + 1]
        entries: dict[tuple[int, int], Fraction] = {}
        if not src or not dst:
            diffs.append(entries)
            continue
        for ch, row0 in dst.items():
            end = ch[-1]
            dim_end = dims[end]
            for i in range(n + 1):
                face = ch[:i] + ch[i + 1:]
                col0 = src[face]
                sign = 1 if i % 2 == 0 else -1
                for k in range(dim_end):
                    key = (row0 + k, col0 + k)
                    entries[key] = entries.get(key, 0) + sign
            prev = ch[-2]
            if dims[prev]:
                col0 = src[ch[:-1]]
                sign = 1 if (n + 1) % 2 == 0 else -1
                lp, le = local[prev], local[end]
                for (r, c), v in sheaf.maps[(prev, end)].items():
                    if c in lp and r in le:
                        key = (row0 + le[r], col0 + lp[c])
                        entries[key] = entries.get(key, 0) + sign * v
        diffs.append({k: v for k, v in entries.items() if v})
    return sizes, diffs


def _block(sheaf: GradedSheaf, chains: list[list[tuple[int, ...]]], b: Bidegree) -> tuple[list[int], list[int]]:
    """Cochain dimensions and differential ranks in bidegree ``b``."""
    sizes, diffs = _coboundaries(sheaf, chains, b)
    ranks = [sparse_rank(e, sizes[n + 1], sizes[n]) for n, e in enumerate(diffs)]
    return sizes, ranks


def _block_cohomology(sheaf: GradedSheaf, chains, b: Bidegree) -> dict[int, int]:
    sizes, ranks = _block(sheaf, chains, b)
    out = {}
    for n, c in enumerate(sizes):
        h = c - (ranks[n] if n < len(ranks) else 0) - (ranks[n - 1] if n > 0 else 0)
        if h:
            out[n] = h
    return out


_WORKER: tuple | None = None


def _init_worker(sheaf, chains) -> None:
    global _WORKER
    _WORKER = (sheaf, chains)


def _worker_task(b: Bidegree) -> tuple[Bidegree, dict[int, int]]:
    sheaf, chains = _WORKER
    return b, _block_cohomology(sheaf, chains, b)


CohomologyRanks = dict[tuple[int, Bidegree], int]


def cohomology(sheaf: GradedSheaf, jobs: int = 1, check: bool = True) -> CohomologyRanks:
    """Ranks of H^n(P, F^{λ,μ}) for every degree n and bidegree (λ, μ).

    With ``check`` the restriction matrices are first verified to preserve
    bidegrees and satisfy the composition law; a ValueError is raised
    otherwise.  ``jobs > 1`` distributes bidegree blocks over processes; the
    result does not depend on the schedule.
    """
    if check:
        if sheaf.grading_violations():
            raise ValueError("restriction maps do not preserve bidegrees")
        bad = sheaf.composition_violations()
        if bad:
            raise ValueError(f"composition law fails on {len(bad)} chains, e.g. {bad[0]}")
    chains = _all_chains(sheaf.poset)
    degrees = sheaf.bidegrees()
    results: dict[Bidegree, dict[int, int]] = {}
    if jobs > 1 and len(degrees) > 1:
        with ProcessPoolExecutor(max_workers=jobs, initializer=_init_worker, initargs=(sheaf, chains)) as ex:
            for b, res in ex.map(_worker_task, degrees):
                results[b] = res
    else:
        for b in degrees:
            results[b] = _block_cohomology(sheaf, chains, b)
    out: CohomologyRanks = {}
    for b in degrees:
        for n, h in results[b].items():
            out[(n, b)] = h
    return dict(sorted(out.items()))


def cochain_dimensions(sheaf: GradedSheaf) -> dict[tuple[int, Bidegree], int]:
    chains = _all_chains(sheaf.poset)
    out = {}
    for b in sheaf.bidegrees():
        sizes, _ = _block(sheaf, chains, b)
        for n, c in enumerate(sizes):
            if c:
                out[(n, b)] = c
    return out


def global_sections_dim(sheaf: GradedSheaf, b: Bidegree) -> int:
    """dim of compatible families in bidegree ``b``, using cover relations only."""
    local = [[k for k, d in enumerate(deg) if d == b] for deg in sheaf.degrees]
    offset, total = [], 0
    for loc in local:
        offset.append(total)
        total += len(loc)
    entries: dict[tuple[int, int], Fraction] = {}
    row = 0
    for i, j in sheaf.poset.covers():
        if not local[j]:
            continue
        pos_i = {k: n for n, k in enumerate(local[i])}
        pos_j = {k: n for n, k in enumerate(local[j])}
        for (r, c), v in sheaf.maps[(i, j)].items():
            if c in pos_i and r in pos_j:
                entries[(row + pos_j[r], offset[i] + pos_i[c])] = -v
        for n in range(len(local[j])):
            key = (row + n, offset[j] + n)
            entries[key] = entries.get(key, 0) + 1
        row += len(local[j])
    entries = {k: v for k, v in entries.items() if v}
    return total - sparse_rank(entries, row, total)


def star_cohomology_audit(sheaf: GradedSheaf) -> list[str]:
    """Check H^0(St(x), F) ≅ F(x) and H^{>0}(St(x), F) = 0 for every x.

    St(x) is the up-set of x, the smallest open set containing it.  Returns
    a list of human-readable failures, empty when the sheaf is well formed.
    """
    failures: list[str] = []
    for i, j, k in sheaf.composition_violations():
        failures.append(f"composition law fails on chain {i} < {j} < {k}")
    for x in range(len(sheaf.poset)):
        star = sheaf.restrict_to(sheaf.poset.up_set(x))
        H = cohomology(star, check=False)
        expected = sheaf.stalk_dims(x)
        for b in sorted(set(expected) | {b for (_, b) in H}):
            h0 = H.get((0, b), 0)
            if h0 != expected.get(b, 0):
                failures.append(f"element {x}: H^0 in bidegree {b} has dim {h0}, stalk has {expected.get(b, 0)}")
        for (n, b), h in H.items():
            if n > 0 and h:
                failures.append(f"element {x}: H^{n} in bidegree {b} is nonzero ({h})")
    return failures
