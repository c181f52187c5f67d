# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops: assignment-space scans and the quadrant search.

Semantics must match ``_purekernel`` (scans) and ``search._search_pure``
(quadrant search) exactly, stats included.  All values are restricted to
uint64; the Python callers route anything larger to the pure paths.
"""

from libc.stdint cimport int64_t, uint64_t
from libc.stdlib cimport free, malloc


def scan_one_in_three(int k, clauses):
    """Smallest mask giving every clause exactly one true literal, or -1."""
    cdef Py_ssize_t m = len(clauses)
    cdef int *va = <int *> malloc(3 * m * sizeof(int))
    if va == NULL:
        raise MemoryError()
    cdef Py_ssize_t j
    for j in range(m):
        va[3 * j] = <int> clauses[j][0] - 1
        va[3 * j + 1] = <int> clauses[j][1] - 1
        va[3 * j + 2] = <int> clauses[j][2] - 1
    cdef uint64_t n, limit = (<uint64_t> 1) << k
    cdef int cnt
    cdef bint ok
    try:
        n = 0
        while n < limit:
            ok = True
            for j in range(m):
                cnt = <int> ((n >> va[3 * j]) & 1) \
                    + <int> ((n >> va[3 * j + 1]) & 1) \
                    + <int> ((n >> va[3 * j + 2]) & 1)
                if cnt != 1:
                    ok = False
                    break
            if ok:
                return <int64_t> n
            n += 1
        return -1
    finally:
        free(va)


def scan_target_sum(int k, enc, uint64_t t):
    """Smallest mask whose encoding inner product equals t, or -1."""
    cdef uint64_t *e = <uint64_t *> malloc(k * sizeof(uint64_t))
    if e == NULL:
        raise MemoryError()
    cdef int i
    for i in range(k):
        e[i] = <uint64_t> enc[i]
    cdef uint64_t n, rest, total, limit = (<uint64_t> 1) << k
    try:
        n = 0
        while n < limit:
            total = 0
            rest = n
            i = 0
            while rest:
                if rest & 1:
                    total += e[i]
                rest >>= 1
                i += 1
            if total == t:
                return <int64_t> n
            n += 1
        return -1
    finally:
        free(e)


ctypedef struct SearchState:
    uint64_t *enc
    int k1
    int k
    uint64_t t
    bint repaired
    bint paper_literal
    int64_t call_budget
    int64_t depth_budget
    int64_t calls
    int64_t max_depth
    int64_t cells
    bint exhausted
    int64_t witness


cdef inline uint64_t _mask_value(SearchState *st, uint64_t mask) noexcept:
    cdef uint64_t total = 0
    cdef int i = 0
    while mask:
        if mask & 1:
            total += st.enc[i]
        mask >>= 1
        i += 1
    return total


cdef bint _rec(SearchState *st, int64_t lo_r, int64_t lo_c,
               int64_t hi_r, int64_t hi_c, int64_t depth) noexcept:
    st.calls += 1
    if st.calls > st.call_budget or depth > st.depth_budget:
        st.exhausted = True
        return False
    if depth > st.max_depth:
        st.max_depth = depth
    cdef int64_t row, col
    cdef uint64_t mask, r, s
    if hi_r - lo_r <= 1 and hi_c - lo_c <= 1:
        if not st.repaired:
            return False
        for row in range(lo_r, hi_r + 1):
            for col in range(lo_c, hi_c + 1):
                st.cells += 1
                mask = (<uint64_t> row) | ((<uint64_t> col) << st.k1)
                if _mask_value(st, mask) == st.t:
                    st.witness = <int64_t> mask
                    return True
        return False
    cdef int64_t mid_r = (lo_r + hi_r) >> 1
    cdef int64_t mid_c = (lo_c + hi_c) >> 1
    cdef int64_t up_r = (lo_r + hi_r + 1) >> 1
    cdef int64_t up_c = (lo_c + hi_c + 1) >> 1
    if st.paper_literal:
        r = ((<uint64_t> mid_r) << st.k1) + (<uint64_t> mid_c)
    else:
        r = (<uint64_t> mid_r) | ((<uint64_t> mid_c) << st.k1)
    s = _mask_value(st, r)
    st.cells += 1
    if s == st.t:
        if st.repaired:
            st.witness = <int64_t> r
        return True
    cdef bint wide_r = hi_r - lo_r >= 2
    cdef bint wide_c = hi_c - lo_c >= 2
    cdef int64_t q[3][4]
    cdef int nq
    if st.t < s:
        if wide_r and wide_c:
            q[0][0] = lo_r; q[0][1] = lo_c; q[0][2] = mid_r; q[0][3] = mid_c
            q[1][0] = lo_r; q[1][1] = up_c; q[1][2] = mid_r; q[1][3] = hi_c
            q[2][0] = up_r; q[2][1] = lo_c; q[2][2] = hi_r; q[2][3] = mid_c
            nq = 3
        elif not wide_r:
            q[0][0] = lo_r; q[0][1] = lo_c; q[0][2] = hi_r; q[0][3] = mid_c
            nq = 1
        else:
            q[0][0] = lo_r; q[0][1] = lo_c; q[0][2] = mid_r; q[0][3] = hi_c
            nq = 1
    else:
        if wide_r and wide_c:
            q[0][0] = lo_r; q[0][1] = up_c; q[0][2] = mid_r; q[0][3] = hi_c
            q[1][0] = up_r; q[1][1] = lo_c; q[1][2] = hi_r; q[1][3] = mid_c
            q[2][0] = up_r; q[2][1] = up_c; q[2][2] = hi_r; q[2][3] = hi_c
            nq = 3
        elif not wide_r:
            q[0][0] = lo_r; q[0][1] = up_c; q[0][2] = hi_r; q[0][3] = hi_c
            nq = 1
        else:
            q[0][0] = up_r; q[0][1] = lo_c; q[0][2] = hi_r; q[0][3] = hi_c
            nq = 1
    cdef int i
    for i in range(nq):
        if _rec(st, q[i][0], q[i][1], q[i][2], q[i][3], depth + 1):
            return True
        if st.exhausted:
            return False
    return False


def search_2dib(enc, int k1, int k2, uint64_t t,
                int64_t lo_r, int64_t lo_c, int64_t hi_r, int64_t hi_c,
                bint repaired, bint paper_literal,
                int64_t call_budget, int64_t depth_budget):
    """Quadrant search over the implicit matrix; returns
    (found, witness_mask, calls, max_depth, cells, exhausted)."""
    cdef int k = len(enc)
    cdef SearchState st
    st.enc = <uint64_t *> malloc(k * sizeof(uint64_t))
    if st.enc == NULL:
        raise MemoryError()
    cdef int i
    for i in range(k):
        st.enc[i] = <uint64_t> enc[i]
    st.k1 = k1
    st.k = k
    st.t = t
    st.repaired = repaired
    st.paper_literal = paper_literal
    st.call_budget = call_budget
    st.depth_budget = depth_budget
    st.calls = 0
    st.max_depth = 0
    st.cells = 0
    st.exhausted = False
    st.witness = -1
    cdef bint found
    try:
        found = _rec(&st, lo_r, lo_c, hi_r, hi_c, 1)
        if st.exhausted:
            found = False
            st.witness = -1
        return (found, st.witness, st.calls, st.max_depth, st.cells, st.exhausted)
    finally:
        free(st.enc)
