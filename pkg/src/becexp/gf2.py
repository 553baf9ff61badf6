"""Regular LDPC ensembles over GF(2): graphs, matrices, ranks.

A code in the (l, k)-regular ensemble is the kernel of a sparse M x N
parity-check matrix with column degree l and row degree k, sampled by
the configuration model (uniform stub matching with parallel-edge
repair).  Rank and kernel computations restrict to an erased column set
and run on bit-packed words.
"""

from typing import NamedTuple

import numpy as np

from . import _backend
from .errors import (
    DivisibilityError,
    DomainError,
    GraphConstructionError,
)
from .rng import Stream

#: attempted repair swaps per edge before giving up on a stub matching
REPAIR_BUDGET_PER_EDGE = 10


class EnsembleParams(NamedTuple):
    """Degree pair (bit_degree l, check_degree k) of a regular ensemble."""

    bit_degree: int
    check_degree: int

    def rate(self):
        """Design rate R = 1 - l/k."""
        return 1.0 - self.bit_degree / self.check_degree

    def validate(self):
        l, k = self.bit_degree, self.check_degree
        if int(l) != l or int(k) != k:
            raise DomainError("degrees must be integers")
        if l < 2:
            raise DomainError(f"bit degree must be at least 2, got {l}")
        if k <= l:
            raise DomainError(
                f"check degree must exceed bit degree for positive rate, got ({l},{k})"
            )
        return self


class ErasurePattern(NamedTuple):
    """Sorted indices of the erased bits of one channel realization."""

    indices: np.ndarray

    @property
    def size(self):
        return int(self.indices.size)


def _pattern_indices(restrict_to):
    idx = getattr(restrict_to, "indices", restrict_to)
    return np.asarray(idx, dtype=np.int64)


class ParityCheckMatrix:
    """Sparse binary matrix in CSR form; rows are checks, columns bits.

    Immutable once built.  Row entries are kept sorted and duplicate-free;
    the column index is derived eagerly since the peeling decoder needs
    both orientations.
    """

    __slots__ = ("n_bits", "n_checks", "row_ptr", "row_bits", "col_ptr", "col_checks")

    def __init__(self, n_bits, row_ptr, row_bits):
        self.n_bits = int(n_bits)
        self.row_ptr = np.ascontiguousarray(row_ptr, dtype=np.int32)
        self.row_bits = np.ascontiguousarray(row_bits, dtype=np.int32)
        self.n_checks = len(self.row_ptr) - 1
        degs = np.diff(self.row_ptr)
        checks_of_edge = np.repeat(
            np.arange(self.n_checks, dtype=np.int32), degs
        )
        order = np.argsort(self.row_bits, kind="stable")
        self.col_ptr = np.zeros(self.n_bits + 1, dtype=np.int32)
        np.cumsum(np.bincount(self.row_bits, minlength=self.n_bits), out=self.col_ptr[1:])
        self.col_checks = np.ascontiguousarray(checks_of_edge[order])
        for a in (self.row_ptr, self.row_bits, self.col_ptr, self.col_checks):
            a.flags.writeable = False

    @classmethod
    def from_rows(cls, rows, n_bits):
        ptr = np.zeros(len(rows) + 1, dtype=np.int32)
        ptr[1:] = np.cumsum([len(r) for r in rows])
        flat = np.fromiter(
            (b for r in rows for b in sorted(r)), dtype=np.int32, count=int(ptr[-1])
        )
        return cls(n_bits, ptr, flat)

    @property
    def n_edges(self):
        return int(self.row_ptr[-1])

    def row(self, i):
        """Bit indices of check i (sorted)."""
        return self.row_bits[self.row_ptr[i]:self.row_ptr[i + 1]]

    def col(self, b):
        """Check indices incident to bit b (sorted)."""
        return self.col_checks[self.col_ptr[b]:self.col_ptr[b + 1]]

    def to_rows(self):
        return [self.row(i).tolist() for i in range(self.n_checks)]

    def __eq__(self, other):
        if not isinstance(other, ParityCheckMatrix):
            return NotImplemented
        return (
            self.n_bits == other.n_bits
            and np.array_equal(self.row_ptr, other.row_ptr)
            and np.array_equal(self.row_bits, other.row_bits)
        )

    def __hash__(self):
        return hash((self.n_bits, self.n_checks, self.row_bits.tobytes()))

    def __repr__(self):
        return f"ParityCheckMatrix(n_bits={self.n_bits}, n_checks={self.n_checks})"

    def dumps(self):
        """Text serialization: 'n_bits n_checks' header, then one line of
        space-separated bit indices per check."""
        lines = [f"{self.n_bits} {self.n_checks}"]
        for i in range(self.n_checks):
            lines.append(" ".join(str(b) for b in self.row(i)))
        return "\n".join(lines) + "\n"

    def dump(self, path):
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(self.dumps())

    @classmethod
    def loads(cls, text):
        lines = [ln for ln in text.splitlines()]
        n_bits, n_checks = (int(v) for v in lines[0].split())
        rows = [
            [int(v) for v in lines[1 + i].split()] if lines[1 + i].strip() else []
            for i in range(n_checks)
        ]
        return cls.from_rows(rows, n_bits)

    @classmethod
    def load(cls, path):
        with open(path, "r", encoding="utf-8") as fh:
            return cls.loads(fh.read())


def _sample_with_stream(params, n_bits, stream):
    """Configuration-model matrix drawn from an explicit random stream."""
    l, k = EnsembleParams(*params).validate()
    n_bits = int(n_bits)
    if n_bits * l % k:
        raise DivisibilityError(
            f"n_bits*{l} must be divisible by {k}, got n_bits={n_bits}"
        )
    n_checks = n_bits * l // k
    if n_bits < k:
        raise DomainError(f"need at least {k} bits for row degree {k}")

    stubs = np.repeat(np.arange(n_bits, dtype=np.int32), l)
    stream.counter = _backend.fisher_yates(stubs, stream.base, stream.counter)

    # repair parallel edges by random stub swaps that do not create new ones
    n_edges = stubs.size
    counts = [dict() for _ in range(n_checks)]
    dups = []
    for i in range(n_edges):
        d = counts[i // k]
        b = int(stubs[i])
        m = d.get(b, 0) + 1
        d[b] = m
        if m > 1:
            dups.append(i)
    budget = REPAIR_BUDGET_PER_EDGE * n_edges
    while dups:
        i = dups.pop()
        b = int(stubs[i])
        c = i // k
        if counts[c].get(b, 0) < 2:
            continue  # already repaired from the partner side
        while True:
            if budget == 0:
                raise GraphConstructionError(
                    f"could not remove parallel edges within "
                    f"{REPAIR_BUDGET_PER_EDGE * n_edges} swaps"
                )
            budget -= 1
            j = stream.randint(n_edges)
            c2 = j // k
            b2 = int(stubs[j])
            if c2 == c or b2 == b:
                continue
            if counts[c2].get(b, 0) or counts[c].get(b2, 0):
                continue
            stubs[i], stubs[j] = b2, b
            counts[c][b] -= 1
            counts[c][b2] = 1
            counts[c2][b2] -= 1
            counts[c2][b] = 1
            break

    rows = np.sort(stubs.reshape(n_checks, k), axis=1)
    row_ptr = np.arange(0, n_edges + 1, k, dtype=np.int32)
    return ParityCheckMatrix(n_bits, row_ptr, rows.reshape(-1))


def sample_regular_matrix(params, n_bits, seed):
    """Uniform (l,k)-biregular parity-check matrix, no parallel edges.

    Deterministic per (params, n_bits, seed); uses the dedicated
    fixed-matrix random stream, so it coincides with the matrix used by
    ``run_monte_carlo(..., matrix_mode="fixed")`` at the same seed.
    """
    return _sample_with_stream(params, n_bits, Stream(seed, 1))


def _pack_columns(matrix, cols):
    """Bit-pack the restriction of ``matrix`` to the given columns.

    Returns an (n_checks, n_words) uint64 array where selected column j
    (in ``cols`` order) occupies bit j & 63 of word j >> 6.
    """
    cols = np.asarray(cols, dtype=np.int64)
    n_sel = cols.size
    n_words = max(1, (n_sel + 63) >> 6)
    packed = np.zeros((matrix.n_checks, n_words), dtype=np.uint64)
    if n_sel == 0 or matrix.n_edges == 0:
        return packed, 0
    pos = np.full(matrix.n_bits, -1, dtype=np.int64)
    pos[cols] = np.arange(n_sel, dtype=np.int64)
    degs = np.diff(matrix.row_ptr)
    rows_of_edge = np.repeat(np.arange(matrix.n_checks, dtype=np.int64), degs)
    p = pos[matrix.row_bits]
    m = p >= 0
    r = rows_of_edge[m]
    pp = p[m]
    np.bitwise_or.at(
        packed,
        (r, pp >> 6),
        np.uint64(1) << (pp & 63).astype(np.uint64),
    )
    return packed, int(n_sel)


def gf2_rank(matrix, restrict_to=None):
    """GF(2) rank of the matrix, optionally restricted to erased columns.

    ``restrict_to`` may be an ErasurePattern or any index array; None
    means all columns.
    """
    if restrict_to is None:
        cols = np.arange(matrix.n_bits, dtype=np.int64)
    else:
        cols = _pattern_indices(restrict_to)
    packed, n_sel = _pack_columns(matrix, cols)
    if n_sel == 0:
        return 0
    return int(_backend.gf2_rank_packed(packed, n_sel))


def kernel_dimension(matrix, restrict_to=None):
    """dim ker of the (restricted) matrix: #columns - rank."""
    n_sel = matrix.n_bits if restrict_to is None else _pattern_indices(restrict_to).size
    return int(n_sel) - gf2_rank(matrix, restrict_to)
