"""Monte-Carlo laboratory: erasure sampling, the peeling decoder, exact
solution entropy per instance, aggregate simulation reports, and the
empirical potential estimator.

Error criterion throughout: a trial fails iff the received word is
compatible with more than one codeword, i.e. S >= 1 where S is the
base-2 log of the number of compatible codewords.  S never depends on
the transmitted codeword (linearity), so none is ever materialized.
"""

import math
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from typing import NamedTuple

import numpy as np

from . import _backend
from .errors import DomainError, InsufficientSamples
from .gf2 import (
    EnsembleParams,
    ErasurePattern,
    ParityCheckMatrix,
    _pattern_indices,
    _sample_with_stream,
    kernel_dimension,
)
from .rng import Stream


class PeelingResult(NamedTuple):
    core_bits: int
    core_checks: int
    decoded: bool
    rounds: int
    core_matrix: ParityCheckMatrix
    core_bit_indices: np.ndarray


class SimulationReport(NamedTuple):
    n_bits: int
    p: float
    trials: int
    seed: int
    matrix_mode: str
    mean_entropy_density: float
    median_entropy_density: float
    error_rate: float
    mean_core_bits: float
    mean_core_checks: float
    entropy_histogram: dict


def sample_erasure(n_bits, p, rng_stream):
    """Erase each of n_bits independently with probability p."""
    n_bits = int(n_bits)
    p = float(p)
    if n_bits < 0:
        raise DomainError(f"n_bits must be nonnegative, got {n_bits}")
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"erasure probability must be in [0,1], got {p}")
    u = rng_stream.doubles(n_bits)
    return ErasurePattern(np.nonzero(u < p)[0].astype(np.int64))


def peel(matrix, erasure):
    """Run the peeling decoder and return the residual core.

    A check incident to exactly one erased bit determines that bit;
    peeling removes such bits in synchronous waves until no check sees a
    single erasure.  What remains is the core: erased bits all of whose
    checks see at least two erasures.
    """
    idx = _pattern_indices(erasure)
    erased = np.zeros(matrix.n_bits, dtype=np.uint8)
    erased[idx] = 1
    rp, rb = matrix.row_ptr, matrix.row_bits
    rows_of_edge = np.repeat(np.arange(matrix.n_checks, dtype=np.int32), np.diff(rp))
    on = erased[rb].astype(bool)
    hot = rows_of_edge[on]
    cnt = np.bincount(hot, minlength=matrix.n_checks).astype(np.int32)
    sumidx = np.bincount(
        hot, weights=rb[on].astype(np.float64), minlength=matrix.n_checks
    ).astype(np.int64)
    rounds = _backend.peel_waves(
        rp, rb, matrix.col_ptr, matrix.col_checks, erased, cnt, sumidx
    )
    core_idx = np.nonzero(erased)[0].astype(np.int32)
    core_rows = cnt >= 2
    n_core_checks = int(np.count_nonzero(core_rows))
    e_mask = erased[rb].astype(bool)
    pos = np.full(matrix.n_bits, -1, dtype=np.int32)
    pos[core_idx] = np.arange(core_idx.size, dtype=np.int32)
    new_ptr = np.zeros(n_core_checks + 1, dtype=np.int32)
    np.cumsum(cnt[core_rows], out=new_ptr[1:])
    core_matrix = ParityCheckMatrix(int(core_idx.size), new_ptr, pos[rb[e_mask]])
    return PeelingResult(
        core_bits=int(core_idx.size),
        core_checks=n_core_checks,
        decoded=core_idx.size == 0,
        rounds=int(rounds),
        core_matrix=core_matrix,
        core_bit_indices=core_idx,
    )


def solution_entropy(matrix, erasure):
    """Exact log2 of the number of codewords compatible with the received
    word: the GF(2) kernel dimension of the erased-column submatrix."""
    return kernel_dimension(matrix, erasure)


def _core_entropy(result):
    """S from a peeling result: core size minus the core's GF(2) rank.

    Peeling steps preserve the solution count, so this equals
    solution_entropy on the full instance at a fraction of the cost.
    """
    if result.core_bits == 0:
        return 0
    cm = result.core_matrix
    return result.core_bits - _backend.sparse_rank(
        cm.row_ptr, cm.row_bits, result.core_bits
    )


def _run_chunk(params, n_bits, p, seed, fixed_matrix, lo, hi):
    s_sum = nc_sum = mc_sum = errors = 0
    hist = Counter()
    for t in range(lo, hi):
        if fixed_matrix is None:
            matrix = _sample_with_stream(params, n_bits, Stream(seed, 2 * t + 1))
        else:
            matrix = fixed_matrix
        pattern = sample_erasure(n_bits, p, Stream(seed, 2 * t))
        res = peel(matrix, pattern)
        s = _core_entropy(res)
        s_sum += s
        nc_sum += res.core_bits
        mc_sum += res.core_checks
        if s >= 1:
            errors += 1
        hist[s] += 1
    return s_sum, nc_sum, mc_sum, errors, hist


def run_monte_carlo(
    params, n_bits, p, trials, seed, matrix_mode="resampled", threads=1
):
    """Aggregate peeling + exact-entropy statistics over many trials.

    matrix_mode "fixed" reuses one matrix (noise-average, typical-code
    statistics); "resampled" draws a fresh matrix per trial (joint
    code-and-noise statistics).  Per-trial RNG streams are derived from
    (seed, trial index), and all aggregation is integer-exact, so the
    report is identical for any thread count.
    """
    params = EnsembleParams(*params).validate()
    n_bits = int(n_bits)
    trials = int(trials)
    threads = int(threads)
    p = float(p)
    if trials < 1:
        raise DomainError(f"need at least one trial, got {trials}")
    if threads < 1:
        raise DomainError(f"need at least one thread, got {threads}")
    if matrix_mode not in ("fixed", "resampled"):
        raise DomainError(f"unknown matrix_mode {matrix_mode!r}")
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"erasure probability must be in [0,1], got {p}")
    fixed_matrix = None
    if matrix_mode == "fixed":
        fixed_matrix = _sample_with_stream(params, n_bits, Stream(seed, 1))

    if threads == 1:
        parts = [_run_chunk(params, n_bits, p, seed, fixed_matrix, 0, trials)]
    else:
        step = (trials + threads - 1) // threads
        bounds = [
            (lo, min(lo + step, trials)) for lo in range(0, trials, step)
        ]
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(
                pool.map(
                    lambda b: _run_chunk(
                        params, n_bits, p, seed, fixed_matrix, b[0], b[1]
                    ),
                    bounds,
                )
            )

    s_sum = nc_sum = mc_sum = errors = 0
    hist = Counter()
    for cs, cn, cm, ce, ch in parts:
        s_sum += cs
        nc_sum += cn
        mc_sum += cm
        errors += ce
        hist.update(ch)

    half = (trials + 1) // 2
    acc = 0
    median_s = 0
    for value in sorted(hist):
        acc += hist[value]
        if acc >= half:
            median_s = value
            break

    scale = trials * n_bits
    return SimulationReport(
        n_bits=n_bits,
        p=p,
        trials=trials,
        seed=int(seed),
        matrix_mode=matrix_mode,
        mean_entropy_density=s_sum / scale,
        median_entropy_density=median_s / n_bits,
        error_rate=errors / trials,
        mean_core_bits=nc_sum / scale,
        mean_core_checks=mc_sum / scale,
        entropy_histogram=dict(sorted(hist.items())),
    )


def empirical_potential(samples, x_grid, n_bits=None):
    """Estimate phi(x) = log2(E[2^(x*S)])/n from simulation output.

    ``samples`` is either a SimulationReport (from resampled mode) or an
    iterable of integer S values, in which case n_bits must be given.
    Computed by log-sum-exp over the entropy histogram; x = 0 returns 0
    exactly.
    """
    if hasattr(samples, "entropy_histogram"):
        hist = dict(samples.entropy_histogram)
        n = int(samples.n_bits)
    else:
        hist = Counter(int(s) for s in samples)
        if n_bits is None:
            raise DomainError("raw samples need an explicit n_bits")
        n = int(n_bits)
    trials = sum(hist.values())
    if trials < 10:
        raise InsufficientSamples(
            f"need at least 10 samples for the empirical potential, got {trials}"
        )
    log_trials = math.log2(trials)
    out = []
    for x in x_grid:
        x = float(x)
        if x == 0.0:
            out.append((0.0, 0.0))
            continue
        terms = [x * s + math.log2(c) for s, c in hist.items()]
        m = max(terms)
        acc = math.fsum(2.0 ** (t - m) for t in terms)
        out.append((x, (m + math.log2(acc) - log_trials) / n))
    return out


def stats_csv(report):
    """One-row CSV (with header) of the headline statistics."""

    def f(v):
        return format(v, ".12g")

    header = "n,p,trials,seed,mean_s,median_s,error_rate,mean_nc,mean_mc"
    row = ",".join(
        [
            str(report.n_bits),
            f(report.p),
            str(report.trials),
            str(report.seed),
            f(report.mean_entropy_density),
            f(report.median_entropy_density),
            f(report.error_rate),
            f(report.mean_core_bits),
            f(report.mean_core_checks),
        ]
    )
    return header + "\n" + row + "\n"


def histogram_csv(report):
    """CSV of the entropy histogram, S ascending."""
    lines = ["S,count"]
    for s in sorted(report.entropy_histogram):
        lines.append(f"{s},{report.entropy_histogram[s]}")
    return "\n".join(lines) + "\n"
