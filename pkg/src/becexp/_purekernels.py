"""Pure-Python/numpy implementations of the performance kernels.

This module mirrors the compiled extension ``becexp._kernels`` exactly:
same functions, same signatures, same results bit for bit.  It is the
fallback used when the extension is unavailable or when
``BECEXP_FORCE_PURE=1`` is set.  Anything imported from here must stay
semantically in lockstep with the .pyx twin.
"""

import numpy as np

from .rng import GOLDEN, mix64

COMPILED = False


def fisher_yates(arr, base, counter):
    """Shuffle ``arr`` in place; returns the advanced stream counter.

    Draws come from the splitmix64 stream identified by ``base`` starting
    after ``counter``; bounded draws use rejection so the permutation is
    exactly uniform and the draw sequence is implementation-independent.
    """
    n = arr.shape[0]
    for i in range(n - 1, 0, -1):
        m = i + 1
        vmin = (1 << 64) % m
        while True:
            counter += 1
            v = mix64(base + counter * GOLDEN)
            if v >= vmin:
                break
        j = v % m
        if j != i:
            arr[i], arr[j] = arr[j], arr[i]
    return counter


def gf2_rank_packed(a, n_cols):
    """Rank of a bit-packed GF(2) matrix by Gaussian elimination.

    ``a`` is an (n_rows, n_words) uint64 array, 64 columns per word,
    column c in bit (c & 63) of word (c >> 6).  The array is clobbered.
    """
    n_rows = a.shape[0]
    if n_rows == 0 or n_cols == 0:
        return 0
    rank = 0
    one = np.uint64(1)
    for col in range(n_cols):
        w = col >> 6
        b = np.uint64(col & 63)
        nz = np.nonzero((a[rank:, w] >> b) & one)[0]
        if nz.size == 0:
            continue
        piv = rank + int(nz[0])
        if piv != rank:
            a[[rank, piv]] = a[[piv, rank]]
        below = rank + nz[1:]
        if below.size:
            a[below] ^= a[rank]
        rank += 1
        if rank == n_rows:
            break
    return rank


def peel_waves(row_ptr, row_bits, col_ptr, col_checks, erased, cnt, sumidx):
    """Run synchronous peeling waves to completion; returns the wave count.

    ``erased`` (uint8 per bit), ``cnt`` (erased-degree per check) and
    ``sumidx`` (sum of erased bit indices per check) are updated in place;
    on return the erased bits are exactly the core bits and ``cnt`` holds
    core-check degrees.  A wave decides every bit that is the unique
    erased neighbour of some check with erased-degree one, then updates
    all counters at once.
    """
    rounds = 0
    frontier = np.nonzero(cnt == 1)[0]
    while frontier.size:
        bits = np.unique(sumidx[frontier])
        rounds += 1
        erased[bits] = 0
        counts = col_ptr[bits + 1] - col_ptr[bits]
        total = int(counts.sum())
        if total:
            starts = np.repeat(col_ptr[bits], counts)
            offs = np.arange(total, dtype=np.int64) - np.repeat(
                np.cumsum(counts) - counts, counts
            )
            checks = col_checks[starts + offs]
            np.add.at(cnt, checks, -1)
            np.subtract.at(sumidx, checks, np.repeat(bits, counts))
            touched = np.unique(checks)
            frontier = touched[cnt[touched] == 1]
        else:
            frontier = frontier[:0]
    return rounds


def sparse_rank(row_ptr, row_cols, n_cols):
    """Exact GF(2) rank of a sparse matrix given as CSR rows of columns.

    Works by structured elimination: rows of degree one are pivoted at
    sparse cost (pivoting a singleton row just deletes its column
    elsewhere), and when none remain the densest column is "inactivated"
    — moved into a packed dense tail carried per row.  Rows whose sparse
    part empties become dense equations over the inactivated columns
    only, and a final bit-packed elimination on those finishes the count.
    Every step is an exact row operation, so the result equals the rank
    from plain dense elimination while touching a small dense block.

    Rows must not contain repeated column indices.
    """
    n_rows = len(row_ptr) - 1
    if n_rows == 0 or n_cols == 0:
        return 0
    rows = [None] * n_rows
    col_rows = [[] for _ in range(n_cols)]
    col_deg = np.zeros(n_cols, dtype=np.int64)
    stack = []
    live = np.zeros(n_rows, dtype=bool)
    for r in range(n_rows):
        cols = row_cols[row_ptr[r]:row_ptr[r + 1]]
        s = set(int(c) for c in cols)
        rows[r] = s
        if not s:
            continue  # empty row: dependent, contributes nothing
        live[r] = True
        for c in s:
            col_rows[c].append(r)
            col_deg[c] += 1
        if len(s) == 1:
            stack.append(r)

    w_cap = (n_cols + 63) >> 6
    tails = np.zeros((n_rows, w_cap), dtype=np.uint64)
    dense_rows = []
    rank = 0
    n_inact = 0
    tw = 0

    def _drop(r2, c):
        # remove column c from live row r2 after a pivot or inactivation
        s2 = rows[r2]
        s2.discard(c)
        d = len(s2)
        if d == 1:
            stack.append(r2)
        elif d == 0:
            live[r2] = False
            dense_rows.append(r2)

    while True:
        while stack:
            r = stack.pop()
            if not live[r] or len(rows[r]) != 1:
                continue
            c = next(iter(rows[r]))
            rank += 1
            live[r] = False
            for r2 in col_rows[c]:
                if r2 == r or not live[r2] or c not in rows[r2]:
                    continue
                if tw:
                    tails[r2, :tw] ^= tails[r, :tw]
                col_deg[c] -= 1
                _drop(r2, c)
            col_deg[c] = 0
            col_rows[c] = []
        c = int(np.argmax(col_deg))
        if col_deg[c] == 0:
            break
        # inactivate column c: becomes dense coordinate n_inact
        w, bit = n_inact >> 6, np.uint64(1 << (n_inact & 63))
        n_inact += 1
        tw = (n_inact + 63) >> 6
        for r2 in col_rows[c]:
            if not live[r2] or c not in rows[r2]:
                continue
            tails[r2, w] ^= bit
            _drop(r2, c)
        col_deg[c] = 0
        col_rows[c] = []

    if dense_rows and n_inact:
        sub = tails[np.array(dense_rows, dtype=np.intp), :tw].copy()
        rank += gf2_rank_packed(sub, n_inact)
    return rank
