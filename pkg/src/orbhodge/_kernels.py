"""Backend selection for the hot rank kernel.

The compiled ``_rankcore`` extension is used when it was built; otherwise
the pure-Python kernel runs.  Set ``ORBHODGE_PURE=1`` to force the fallback.
Matrices whose entries do not fit in int64, or that would overflow during
elimination, always go through the arbitrary-precision path.
"""

from __future__ import annotations

import os

from . import _rankpy

_INT64 = 2**62
_DENSE_LIMIT = 4_000_000

_core = None
if not os.environ.get("ORBHODGE_PURE"):
    try:
        from . import _rankcore as _core
    except ImportError:
        _core = None

BACKEND = "cython" if _core is not None else "python"


def _small(values) -> bool:
    return all(-_INT64 < v < _INT64 for v in values)


def rank_int(rows: list[list[int]], ncols: int) -> int:
    if _core is not None and len(rows) * ncols <= _DENSE_LIMIT and all(_small(r) for r in rows):
        try:
            return _core.rank_int(rows, ncols)
        except OverflowError:
            pass
    return _rankpy.rank_int(rows, ncols)


def rank_sparse(rows: list[dict[int, int]], ncols: int) -> int:
    if _core is not None and len(rows) * ncols <= _DENSE_LIMIT and all(_small(r.values()) for r in rows):
        try:
            return _core.rank_sparse(rows, ncols)
        except OverflowError:
            pass
    return _rankpy.rank_sparse(rows, ncols)
