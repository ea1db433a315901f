"""Pure-Python fraction-free rank kernel (reference implementation)."""

from __future__ import annotations

from math import gcd


def _content(row: dict[int, int]) -> int:
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            break
    return g


def rank_sparse(rows: list[dict[int, int]], ncols: int) -> int:
    """Rank of an integer matrix given as sparse rows ``{col: value}``.

    Rows are inserted one at a time into an echelon basis keyed by leading
    column.  Each elimination step is a gcd-scaled integer combination, and
    rows are divided by their content afterwards to bound growth.
    """
    pivots: dict[int, dict[int, int]] = {}
    for row in rows:
        r = {c: v for c, v in row.items() if v}
        while r:
            c = min(r)
            p = pivots.get(c)
            if p is None:
                g = _content(r)
                if g > 1:
                    r = {k: v // g for k, v in r.items()}
                pivots[c] = r
                break
            a, b = r[c], p[c]
            g = gcd(a, b)
            ma, mb = b // g, a // g
            out = {k: v * ma for k, v in r.items()}
            for k, v in p.items():
                w = out.get(k, 0) - v * mb
                if w:
                    out[k] = w
                else:
                    out.pop(k, None)
            g = _content(out) if out else 0
            if g > 1:
                out = {k: v // g for k, v in out.items()}
            r = out
    return len(pivots)


def rank_int(rows: list[list[int]], ncols: int) -> int:
    sparse = [{j: v for j, v in enumerate(row) if v} for row in rows]
    return rank_sparse(sparse, ncols)
