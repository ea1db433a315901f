# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled fraction-free rank kernel on int64 rows.

Any intermediate overflow raises OverflowError; the caller then falls back
to the arbitrary-precision Python kernel, so results are always exact.
"""

from libc.stdlib cimport malloc, free
from libc.string cimport memset
from libc.stdint cimport int64_t

cdef extern from *:
    """
    static int _mul_ovf(long long a, long long b, long long *r) { return __builtin_mul_overflow(a, b, r); }
    static int _sub_ovf(long long a, long long b, long long *r) { return __builtin_sub_overflow(a, b, r); }
    """
    int _mul_ovf(long long a, long long b, long long *r) nogil
    int _sub_ovf(long long a, long long b, long long *r) nogil


cdef inline int64_t _gcd(int64_t a, int64_t b) nogil:
    if a < 0:
        a = -a
    if b < 0:
        b = -b
    while b:
        a, b = b, a % b
    return a


cdef int _eliminate(int64_t *M, int nrows, int ncols, int *out_rank) nogil:
    cdef int r = 0, c, i, j, p
    cdef int64_t a, b, g, ma, mb, x, y
    cdef long long t1, t2, t3
    cdef int64_t *rowp
    cdef int64_t *rowi
    for c in range(ncols):
        if r == nrows:
            break
        p = -1
        for i in range(r, nrows):
            if M[<Py_ssize_t>i * ncols + c] != 0:
                p = i
                break
        if p < 0:
            continue
        if p != r:
            for j in range(c, ncols):
                x = M[<Py_ssize_t>p * ncols + j]
                M[<Py_ssize_t>p * ncols + j] = M[<Py_ssize_t>r * ncols + j]
                M[<Py_ssize_t>r * ncols + j] = x
        rowp = M + <Py_ssize_t>r * ncols
        for i in range(r + 1, nrows):
            rowi = M + <Py_ssize_t>i * ncols
            a = rowi[c]
            if a == 0:
                continue
            b = rowp[c]
            g = _gcd(a, b)
            ma = b // g
            mb = a // g
            g = 0
            for j in range(c, ncols):
                if _mul_ovf(rowi[j], ma, &t1):
                    return 1
                if _mul_ovf(rowp[j], mb, &t2):
                    return 1
                if _sub_ovf(t1, t2, &t3):
                    return 1
                rowi[j] = t3
                if t3 != 0 and g != 1:
                    g = _gcd(g, t3)
            if g > 1:
                for j in range(c, ncols):
                    rowi[j] = rowi[j] // g
        r += 1
    out_rank[0] = r
    return 0


def rank_int(rows, int ncols):
    """Rank of a dense integer matrix (list of int lists)."""
    cdef int nrows = len(rows)
    if nrows == 0 or ncols == 0:
        return 0
    cdef int64_t *M = <int64_t *> malloc(<size_t>nrows * ncols * sizeof(int64_t))
    if M == NULL:
        raise MemoryError()
    cdef int i, j, status, rk = 0
    try:
        for i in range(nrows):
            row = rows[i]
            for j in range(ncols):
                M[<Py_ssize_t>i * ncols + j] = row[j]
        with nogil:
            status = _eliminate(M, nrows, ncols, &rk)
        if status:
            raise OverflowError("int64 overflow in rank kernel")
        return rk
    finally:
        free(M)


def rank_sparse(rows, int ncols):
    """Rank of an integer matrix given as sparse ``{col: value}`` rows."""
    cdef int nrows = len(rows)
    if nrows == 0 or ncols == 0:
        return 0
    cdef int64_t *M = <int64_t *> malloc(<size_t>nrows * ncols * sizeof(int64_t))
    if M == NULL:
        raise MemoryError()
    cdef int i, status, rk = 0
    memset(M, 0, <size_t>nrows * ncols * sizeof(int64_t))
    try:
        for i in range(nrows):
            for j, v in rows[i].items():
                M[<Py_ssize_t>i * ncols + <int>j] = v
        with nogil:
            status = _eliminate(M, nrows, ncols, &rk)
        if status:
            raise OverflowError("int64 overflow in rank kernel")
        return rk
    finally:
        free(M)
