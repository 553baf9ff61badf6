# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled performance kernels.

Twin of ``becexp._purekernels`` — identical functions, signatures and
results.  Keep the two in semantic lockstep; tests compare them element
for element.
"""

import numpy as np

from libc.stdint cimport int32_t, int64_t, uint8_t, uint64_t

COMPILED = True

cdef uint64_t _GOLDEN = <uint64_t> 0x9E3779B97F4A7C15
cdef uint64_t _M1 = <uint64_t> 0xBF58476D1CE4E5B9
cdef uint64_t _M2 = <uint64_t> 0x94D049BB133111EB


cdef inline uint64_t _mix(uint64_t z) noexcept nogil:
    z = (z ^ (z >> 30)) * _M1
    z = (z ^ (z >> 27)) * _M2
    return z ^ (z >> 31)


def fisher_yates(int32_t[::1] arr, object base, object counter):
    """Shuffle ``arr`` in place; returns the advanced stream counter.

    Matches the pure implementation draw for draw: splitmix64 outputs
    with rejection sampling for the bounded index.
    """
    cdef uint64_t cbase = <uint64_t> base
    cdef uint64_t ctr = <uint64_t> counter
    cdef int64_t i, n = arr.shape[0]
    cdef uint64_t m, vmin, v, j
    cdef int32_t tmp
    with nogil:
        for i in range(n - 1, 0, -1):
            m = <uint64_t> (i + 1)
            vmin = (<uint64_t> 0 - m) % m
            while True:
                ctr += 1
                v = _mix(cbase + ctr * _GOLDEN)
                if v >= vmin:
                    break
            j = v % m
            if <int64_t> j != i:
                tmp = arr[i]
                arr[i] = arr[<int64_t> j]
                arr[<int64_t> j] = tmp
    return int(ctr)


def gf2_rank_packed(uint64_t[:, ::1] a, object n_cols):
    """Rank of a bit-packed GF(2) matrix by Gaussian elimination.

    Same contract as the pure twin: uint64 words, 64 columns per word,
    the array is clobbered.
    """
    cdef int64_t ncols = <int64_t> n_cols
    cdef int64_t n_rows = a.shape[0]
    cdef int64_t n_words = a.shape[1]
    if n_rows == 0 or ncols == 0:
        return 0
    cdef int64_t rank = 0, col, w, r, piv, t
    cdef uint64_t bit, tmp
    with nogil:
        for col in range(ncols):
            w = col >> 6
            bit = (<uint64_t> 1) << (<uint64_t> (col & 63))
            piv = -1
            for r in range(rank, n_rows):
                if a[r, w] & bit:
                    piv = r
                    break
            if piv < 0:
                continue
            if piv != rank:
                for t in range(n_words):
                    tmp = a[rank, t]
                    a[rank, t] = a[piv, t]
                    a[piv, t] = tmp
            for r in range(piv + 1, n_rows):
                if a[r, w] & bit:
                    for t in range(n_words):
                        a[r, t] ^= a[rank, t]
            rank += 1
            if rank == n_rows:
                break
    return int(rank)


def peel_waves(const int32_t[::1] row_ptr, const int32_t[::1] row_bits,
               const int32_t[::1] col_ptr, const int32_t[::1] col_checks,
               uint8_t[::1] erased, int32_t[::1] cnt, int64_t[::1] sumidx):
    """Run synchronous peeling waves to completion; returns the wave count.

    In-place on ``erased``/``cnt``/``sumidx`` with the same wave semantics
    as the pure twin: all checks of erased-degree one at the start of a
    wave decide their unique erased bit simultaneously.
    """
    cdef int64_t n_checks = cnt.shape[0]
    cdef int64_t n_bits = erased.shape[0]
    frontier_np = np.empty(n_checks, dtype=np.int32)
    nxt_np = np.empty(n_checks, dtype=np.int32)
    decided_np = np.empty(n_checks, dtype=np.int32)
    mark_np = np.zeros(n_checks, dtype=np.uint8)
    cdef int32_t[::1] fr = frontier_np
    cdef int32_t[::1] nx = nxt_np
    cdef int32_t[::1] dec = decided_np
    cdef uint8_t[::1] mark = mark_np
    cdef int64_t nf = 0, nn, nd, t, e, rounds = 0
    cdef int32_t a, b
    with nogil:
        for t in range(n_checks):
            if cnt[t] == 1:
                fr[nf] = <int32_t> t
                nf += 1
        while nf:
            nd = 0
            for t in range(nf):
                a = fr[t]
                b = <int32_t> sumidx[a]
                if erased[b]:
                    erased[b] = 0
                    dec[nd] = b
                    nd += 1
            if nd == 0:
                break
            rounds += 1
            nn = 0
            for t in range(nd):
                b = dec[t]
                for e in range(col_ptr[b], col_ptr[b + 1]):
                    a = col_checks[e]
                    cnt[a] -= 1
                    sumidx[a] -= b
                    if cnt[a] == 1 and not mark[a]:
                        mark[a] = 1
                        nx[nn] = a
                        nn += 1
            nf = 0
            for t in range(nn):
                a = nx[t]
                mark[a] = 0
                if cnt[a] == 1:
                    fr[nf] = a
                    nf += 1
    return int(rounds)


def sparse_rank(const int32_t[::1] row_ptr, const int32_t[::1] row_cols, object n_cols):
    """Exact GF(2) rank of a sparse CSR matrix by structured elimination.

    Degree-one rows are pivoted at sparse cost; when none remain the
    densest column is inactivated into a packed dense tail per row, and a
    final bit-packed elimination over the inactivated coordinates
    finishes the job.  Same contract as the pure twin; rows must not
    contain repeated column indices.
    """
    cdef int64_t ncols = <int64_t> n_cols
    cdef int64_t n_rows = row_ptr.shape[0] - 1
    if n_rows == 0 or ncols == 0:
        return 0
    cdef int64_t n_inc = row_ptr[n_rows]

    # mutable copy of the rows: live prefix of each row's column list
    rcols_np = np.empty(n_inc, dtype=np.int32)
    rdeg_np = np.empty(n_rows, dtype=np.int32)
    cdef int32_t[::1] rcols = rcols_np
    cdef int32_t[::1] rdeg = rdeg_np

    # column -> rows index (CSR by counting sort), plus live column degree
    cdeg_np = np.zeros(ncols, dtype=np.int64)
    cptr_np = np.zeros(ncols + 1, dtype=np.int64)
    crows_np = np.empty(n_inc, dtype=np.int32)
    cfill_np = np.zeros(ncols, dtype=np.int64)
    cdef int64_t[::1] cdeg = cdeg_np
    cdef int64_t[::1] cptr = cptr_np
    cdef int32_t[::1] crows = crows_np
    cdef int64_t[::1] cfill = cfill_np

    live_np = np.zeros(n_rows, dtype=np.uint8)
    stack_np = np.empty(n_rows, dtype=np.int32)
    dense_np = np.empty(n_rows, dtype=np.int32)
    cdef uint8_t[::1] live = live_np
    cdef int32_t[::1] stack = stack_np
    cdef int32_t[::1] dense = dense_np

    cdef int64_t w_cap = (ncols + 63) >> 6
    tails_np = np.zeros((n_rows, w_cap), dtype=np.uint64)
    cdef uint64_t[:, ::1] tails = tails_np

    cdef int64_t r, r2, c, e, t, d, pos, best
    cdef int64_t ns = 0, ndense = 0, rank = 0, n_inact = 0, tw = 0, w
    cdef uint64_t bit

    with nogil:
        for r in range(n_rows):
            d = 0
            for e in range(row_ptr[r], row_ptr[r + 1]):
                c = row_cols[e]
                rcols[row_ptr[r] + d] = <int32_t> c
                d += 1
                cdeg[c] += 1
            rdeg[r] = <int32_t> d
            if d > 0:
                live[r] = 1
                if d == 1:
                    stack[ns] = <int32_t> r
                    ns += 1
        for c in range(ncols):
            cptr[c + 1] = cptr[c] + cdeg[c]
        for r in range(n_rows):
            for e in range(row_ptr[r], row_ptr[r + 1]):
                c = row_cols[e]
                crows[cptr[c] + cfill[c]] = <int32_t> r
                cfill[c] += 1

        while True:
            while ns:
                ns -= 1
                r = stack[ns]
                if not live[r] or rdeg[r] != 1:
                    continue
                c = rcols[row_ptr[r]]
                rank += 1
                live[r] = 0
                for e in range(cptr[c], cptr[c + 1]):
                    r2 = crows[e]
                    if r2 == r or not live[r2]:
                        continue
                    pos = -1
                    for t in range(row_ptr[r2], row_ptr[r2] + rdeg[r2]):
                        if rcols[t] == c:
                            pos = t
                            break
                    if pos < 0:
                        continue
                    for t in range(tw):
                        tails[r2, t] ^= tails[r, t]
                    rdeg[r2] -= 1
                    rcols[pos] = rcols[row_ptr[r2] + rdeg[r2]]
                    d = rdeg[r2]
                    if d == 1:
                        stack[ns] = <int32_t> r2
                        ns += 1
                    elif d == 0:
                        live[r2] = 0
                        dense[ndense] = <int32_t> r2
                        ndense += 1
                cdeg[c] = 0
            best = 0
            for c in range(1, ncols):
                if cdeg[c] > cdeg[best]:
                    best = c
            c = best
            if cdeg[c] == 0:
                break
            w = n_inact >> 6
            bit = (<uint64_t> 1) << (<uint64_t> (n_inact & 63))
            n_inact += 1
            tw = (n_inact + 63) >> 6
            for e in range(cptr[c], cptr[c + 1]):
                r2 = crows[e]
                if not live[r2]:
                    continue
                pos = -1
                for t in range(row_ptr[r2], row_ptr[r2] + rdeg[r2]):
                    if rcols[t] == c:
                        pos = t
                        break
                if pos < 0:
                    continue
                tails[r2, w] ^= bit
                rdeg[r2] -= 1
                rcols[pos] = rcols[row_ptr[r2] + rdeg[r2]]
                d = rdeg[r2]
                if d == 1:
                    stack[ns] = <int32_t> r2
                    ns += 1
                elif d == 0:
                    live[r2] = 0
                    dense[ndense] = <int32_t> r2
                    ndense += 1
            cdeg[c] = 0

    if ndense and n_inact:
        sub = tails_np[dense_np[:ndense].astype(np.intp), :tw].copy()
        rank += gf2_rank_packed(sub, int(n_inact))
    return int(rank)
