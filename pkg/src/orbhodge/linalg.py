"""Exact integer and rational linear algebra.

Everything here works over Python integers and ``fractions.Fraction``.
Matrices are plain lists of rows; nothing is ever converted to floats.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb, gcd, lcm
from typing import Iterable, Sequence

from sympy import Matrix
from sympy.matrices.normalforms import hermite_normal_form, smith_normal_decomp

from . import _kernels

IntMatrix = list[list[int]]
RatMatrix = list[list[Fraction]]


def as_fractions(A: Sequence[Sequence]) -> RatMatrix:
    return [[Fraction(x) for x in row] for row in A]


def identity(n: int) -> IntMatrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def transpose(A: Sequence[Sequence]) -> list[list]:
    if not A:
        return []
    return [list(col) for col in zip(*A)]


def matmul(A: Sequence[Sequence], B: Sequence[Sequence]) -> list[list]:
    Bt = transpose(B)
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def matvec(A: Sequence[Sequence], v: Sequence) -> list:
    return [sum(a * x for a, x in zip(row, v)) for row in A]


def dot(u: Sequence, v: Sequence):
    return sum(a * b for a, b in zip(u, v))


def _from_sympy(M: Matrix) -> IntMatrix:
    return [[int(M[i, j]) for j in range(M.cols)] for i in range(M.rows)]


def smith_normal_form(A: Sequence[Sequence[int]]) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return ``(U, S, V)`` with ``U*A*V == S`` and ``S`` in Smith normal form.

    ``U`` and ``V`` are unimodular.  The diagonal of ``S`` is nonnegative and
    satisfies the divisibility chain.
    """
    rows = len(A)
    cols = len(A[0]) if rows else 0
    if rows == 0 or cols == 0:
        return identity(rows), [[0] * cols for _ in range(rows)], identity(cols)
    S, U, V = smith_normal_decomp(Matrix(A))
    S, U, V = _from_sympy(S), _from_sympy(U), _from_sympy(V)
    # sympy may leave negative diagonal entries; flip the row of U to fix it
    for i in range(min(rows, cols)):
        if S[i][i] < 0:
            S[i][i] = -S[i][i]
            U[i] = [-x for x in U[i]]
    return U, S, V


def elementary_divisors(A: Sequence[Sequence[int]]) -> list[int]:
    _, S, _ = smith_normal_form(A)
    return [S[i][i] for i in range(min(len(S), len(S[0]) if S else 0)) if S[i][i] != 0]


def lattice_basis(generators: Sequence[Sequence[Fraction]]) -> RatMatrix:
    """A basis (as rows) of the lattice spanned by rational ``generators``."""
    gens = [list(map(Fraction, g)) for g in generators]
    if not gens:
        return []
    den = lcm(*(x.denominator for g in gens for x in g))
    scaled = [[int(x * den) for x in g] for g in gens]
    if not any(any(row) for row in scaled):
        return []
    # column-style HNF of the transpose gives a basis of the column span
    H = hermite_normal_form(Matrix(scaled).T)
    basis = []
    for j in range(H.cols):
        col = [Fraction(int(H[i, j]), den) for i in range(H.rows)]
        if any(col):
            basis.append(col)
    return basis


def rref(A: Sequence[Sequence[Fraction]]) -> tuple[RatMatrix, list[int]]:
    """Reduced row echelon form and pivot columns."""
    M = [list(map(Fraction, row)) for row in A]
    pivots: list[int] = []
    if not M:
        return M, pivots
    ncols = len(M[0])
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        inv = 1 / M[r][c]
        M[r] = [x * inv for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    return M, pivots


def rank_and_kernel(A: Sequence[Sequence], cols: int | None = None) -> tuple[int, RatMatrix]:
    """Rank of ``A`` and a basis of its right kernel."""
    if cols is None:
        cols = len(A[0]) if A else 0
    if not A:
        return 0, [[Fraction(int(i == j)) for j in range(cols)] for i in range(cols)]
    R, pivots = rref(A)
    free = [c for c in range(cols) if c not in pivots]
    kernel = []
    for f in free:
        v = [Fraction(0)] * cols
        v[f] = Fraction(1)
        for i, p in enumerate(pivots):
            v[p] = -R[i][f]
        kernel.append(v)
    return len(pivots), kernel


def independent_rows(vectors: Sequence[Sequence]) -> list[int]:
    """Indices of a maximal linearly independent prefix-greedy subset."""
    chosen: list[int] = []
    basis: RatMatrix = []
    for i, v in enumerate(vectors):
        trial = basis + [list(map(Fraction, v))]
        if rank(trial) == len(trial):
            basis = trial
            chosen.append(i)
    return chosen


def solve(A: Sequence[Sequence], b: Sequence) -> list[Fraction] | None:
    """One exact solution of ``A x = b`` or None when inconsistent."""
    cols = len(A[0]) if A else 0
    aug = [list(map(Fraction, row)) + [Fraction(bi)] for row, bi in zip(A, b)]
    R, pivots = rref(aug)
    if cols in pivots:
        return None
    x = [Fraction(0)] * cols
    for i, p in enumerate(pivots):
        x[p] = R[i][cols]
    return x


def integerize_row(row: Sequence[Fraction]) -> list[int]:
    den = lcm(*(Fraction(x).denominator for x in row)) if row else 1
    return [int(Fraction(x) * den) for x in row]


def rank(A: Sequence[Sequence]) -> int:
    """Exact rank, via fraction-free elimination on integerized rows."""
    rows = [integerize_row(r) for r in A]
    rows = [r for r in rows if any(r)]
    if not rows:
        return 0
    return _kernels.rank_int(rows, len(rows[0]))


def sparse_rank(entries: dict[tuple[int, int], Fraction], nrows: int, ncols: int) -> int:
    """Rank of a matrix given as ``{(row, col): value}``."""
    if not entries or nrows == 0 or ncols == 0:
        return 0
    by_row: dict[int, dict[int, Fraction]] = {}
    for (i, j), v in entries.items():
        if v:
            by_row.setdefault(i, {})[j] = Fraction(v)
    rows = []
    for i in sorted(by_row):
        r = by_row[i]
        den = lcm(*(x.denominator for x in r.values()))
        rows.append({j: int(x * den) for j, x in r.items()})
    return _kernels.rank_sparse(rows, ncols)


# -- wedge powers ------------------------------------------------------------


def wedge_index(d: int, k: int) -> dict[tuple[int, ...], int]:
    return {I: n for n, I in enumerate(combinations(range(d), k))}


def wedge_of(vectors: Sequence[Sequence], d: int) -> list[Fraction]:
    """Coordinates of v_1 ∧ ... ∧ v_k in lexicographic monomial order."""
    k = len(vectors)
    if k == 0:
        return [Fraction(1)]
    cols = [list(map(Fraction, v)) for v in vectors]
    out = []
    for I in combinations(range(d), k):
        out.append(_det([[cols[j][i] for j in range(k)] for i in I]))
    return out


def _det(M: RatMatrix) -> Fraction:
    n = len(M)
    M = [row[:] for row in M]
    det = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if M[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            M[c], M[p] = M[p], M[c]
            det = -det
        det *= M[c][c]
        inv = 1 / M[c][c]
        for i in range(c + 1, n):
            if M[i][c]:
                f = M[i][c] * inv
                M[i] = [x - f * y for x, y in zip(M[i], M[c])]
    return det


def det(A: Sequence[Sequence]) -> Fraction:
    return _det([list(map(Fraction, row)) for row in A])


@dataclass(frozen=True)
class WedgeSubspace:
    ambient_rank: int
    degree: int
    basis: tuple[tuple[Fraction, ...], ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def coordinates_in(self, other: "WedgeSubspace") -> RatMatrix:
        """Matrix (columns = own basis vectors) expressing self inside other."""
        if self.degree != other.degree or self.ambient_rank != other.ambient_rank:
            raise ValueError("wedge subspaces live in different ambient spaces")
        return express_in_basis(other.basis, self.basis)


def express_in_basis(basis: Sequence[Sequence], vectors: Sequence[Sequence]) -> RatMatrix:
    """Columns x_j with sum_i x_j[i] basis[i] == vectors[j]."""
    if not vectors:
        return [[] for _ in basis]
    if not basis:
        if any(any(v) for v in vectors):
            raise ValueError("vector not in span")
        return []
    n = len(basis)
    A = transpose(basis)
    aug = [list(map(Fraction, A[i])) + [Fraction(v[i]) for v in vectors] for i in range(len(A))]
    R, pivots = rref(aug)
    if any(p >= n for p in pivots) or len(pivots) < n:
        raise ValueError("vector not in span")
    X = [[Fraction(0)] * len(vectors) for _ in range(n)]
    for i, p in enumerate(pivots):
        X[p] = R[i][n:]
    return X


def span_basis(vectors: Sequence[Sequence]) -> RatMatrix:
    vecs = [list(map(Fraction, v)) for v in vectors]
    return [vecs[i] for i in independent_rows(vecs)]


def wedge_power(vectors: Sequence[Sequence], k: int, d: int | None = None) -> WedgeSubspace:
    """Image of ∧^k span(vectors) in lexicographic wedge coordinates."""
    if k < 0:
        raise ValueError("degree must be nonnegative")
    if d is None:
        if not vectors:
            raise ValueError("ambient rank needed for an empty spanning set")
        d = len(vectors[0])
    B = span_basis(vectors)
    basis = tuple(tuple(wedge_of([B[i] for i in I], d)) for I in combinations(range(len(B)), k))
    return WedgeSubspace(d, k, basis)


def orthogonal_complement(vectors: Sequence[Sequence], d: int) -> RatMatrix:
    if not vectors:
        return [[Fraction(int(i == j)) for j in range(d)] for i in range(d)]
    _, ker = rank_and_kernel(vectors, d)
    return ker


def decorated_wedge(perp_of: Sequence[Sequence], volume: Sequence[Sequence], a: int, d: int) -> WedgeSubspace:
    """The subspace (∧^{a-r} W) ∧ Vol(L) of ∧^a, with W = perp_of^⊥ ⊇ L.

    ``volume`` holds r linearly independent vectors spanning L.
    """
    r = len(volume)
    if a < r:
        return WedgeSubspace(d, a, ())
    W = orthogonal_complement(perp_of, d)
    vol = [list(map(Fraction, v)) for v in volume]
    complement: RatMatrix = []
    current = list(vol)
    for w in W:
        if rank(current + [w]) > len(current):
            current.append(w)
            complement.append(w)
    if len(current) != len(W):
        raise ValueError("volume vectors do not lie in the annihilator")
    basis = tuple(
        tuple(wedge_of([complement[i] for i in I] + vol, d))
        for I in combinations(range(len(complement)), a - r)
    )
    return WedgeSubspace(d, a, basis)


# -- volumes and Jordan structure --------------------------------------------


def relative_volume(vertices: Sequence[Sequence[int]]) -> int:
    """Normalized lattice volume of a simplex inside its own lattice span.

    The first vertex is the base point; the result is dim! times the euclidean
    volume measured in a basis of the saturated lattice of the span.
    """
    if not vertices:
        raise ValueError("empty simplex")
    base = vertices[0]
    edges = [[int(x) - int(b) for x, b in zip(v, base)] for v in vertices[1:]]
    if not edges:
        return 1
    if rank(edges) < len(edges):
        raise ValueError("degenerate simplex: vertices are affinely dependent")
    vol = 1
    for e in elementary_divisors(edges):
        vol *= e
    return vol


def _matpow_ranks(A: RatMatrix, lam: Fraction) -> list[int]:
    n = len(A)
    B = [[A[i][j] - (lam if i == j else 0) for j in range(n)] for i in range(n)]
    ranks = [n]
    P = [row[:] for row in B]
    while True:
        r = rank(P)
        ranks.append(r)
        if r == ranks[-2] or len(ranks) > n + 2:
            break
        P = matmul(P, B)
    return ranks


def jordan_profile(A: Sequence[Sequence], lam) -> list[int]:
    """Jordan block sizes of ``A`` at eigenvalue ``lam`` (largest first)."""
    M = as_fractions(A)
    n = len(M)
    if any(len(row) != n for row in M):
        raise ValueError("matrix must be square")
    if rank(M) < n:
        raise ValueError("matrix is not invertible")
    r = _matpow_ranks(M, Fraction(lam))
    # number of blocks of size >= k is r[k-1] - r[k]
    at_least = [r[k - 1] - r[k] for k in range(1, len(r))]
    blocks: list[int] = []
    for k in range(len(at_least), 0, -1):
        exact = at_least[k - 1] - (at_least[k] if k < len(at_least) else 0)
        blocks.extend([k] * exact)
    return blocks


def inverse(A: Sequence[Sequence]) -> RatMatrix:
    n = len(A)
    aug = [list(map(Fraction, row)) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(A)]
    R, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ValueError("matrix is not invertible")
    return [row[n:] for row in R]


def primitive(v: Iterable[int]) -> tuple[int, tuple[int, ...]]:
    """Split an integer vector as ``g * w`` with ``w`` primitive."""
    v = tuple(int(x) for x in v)
    g = gcd(*v) if v else 0
    if g == 0:
        return 0, v
    return g, tuple(x // g for x in v)


def n_choose(n: int, k: int) -> int:
    return comb(n, k) if 0 <= k <= n else 0
