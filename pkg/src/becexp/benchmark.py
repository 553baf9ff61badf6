"""Benchmark the pure-python kernels against the compiled ones.

Times the four backend primitives on a realistic workload (a regular
code near its ML threshold), checks that both backends return identical
results, and prints a small comparison table.  Entry point for the
``becexp-bench`` console script.
"""

import argparse
import time

import numpy as np

from . import _backend
from .gf2 import EnsembleParams, _pack_columns, sample_regular_matrix
from .rng import Stream, stream_base
from .simulate import peel, sample_erasure


def _time(fn, reps):
    best = float("inf")
    for _ in range(reps):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def _workload(l, k, n_bits, p, seed):
    params = EnsembleParams(l, k)
    matrix = sample_regular_matrix(params, n_bits, seed)
    pattern = sample_erasure(n_bits, p, Stream(seed, 2))
    res = peel(matrix, pattern)
    core = res.core_matrix
    packed, _ = _pack_columns(core, np.arange(core.n_bits, dtype=np.int64))

    erased = np.zeros(n_bits, dtype=np.uint8)
    erased[pattern.indices] = 1
    rows_of_edge = np.repeat(
        np.arange(matrix.n_checks, dtype=np.int32), np.diff(matrix.row_ptr)
    )
    on = erased[matrix.row_bits].astype(bool)
    hot = rows_of_edge[on]
    cnt = np.bincount(hot, minlength=matrix.n_checks).astype(np.int32)
    sumidx = np.bincount(
        hot,
        weights=matrix.row_bits[on].astype(np.float64),
        minlength=matrix.n_checks,
    ).astype(np.int64)
    return matrix, core, packed, erased, cnt, sumidx


def run(l=3, k=6, n_bits=6000, p=0.55, seed=7, reps=3, out=print):
    matrix, core, packed, erased, cnt, sumidx = _workload(l, k, n_bits, p, seed)
    stubs = np.repeat(np.arange(n_bits, dtype=np.int32), l)
    base = stream_base(seed, 1)

    cases = {
        "shuffle": lambda mod: mod.fisher_yates(stubs.copy(), base, 0),
        "peel": lambda mod: mod.peel_waves(
            matrix.row_ptr,
            matrix.row_bits,
            matrix.col_ptr,
            matrix.col_checks,
            erased.copy(),
            cnt.copy(),
            sumidx.copy(),
        ),
        "dense rank": lambda mod: mod.gf2_rank_packed(packed.copy(), core.n_bits),
        "sparse rank": lambda mod: mod.sparse_rank(
            core.row_ptr, core.row_bits, core.n_bits
        ),
    }

    available = _backend.backends()
    out(
        f"workload: ({l},{k}) code, n={n_bits}, p={p}, core "
        f"{core.n_checks}x{core.n_bits}"
    )
    if len(available) < 2:
        out("compiled backend not available; timing the pure backend only")
    header = f"{'kernel':<12}" + "".join(f"{name:>14}" for name, _ in available)
    out(header + ("       speedup" if len(available) == 2 else ""))
    ok = True
    for label, call in cases.items():
        results = [call(mod) for _, mod in available]
        if len(set(results)) > 1:
            ok = False
            out(f"{label:<12}  BACKEND MISMATCH: {results}")
            continue
        times = [_time(lambda m=mod: call(m), reps) for _, mod in available]
        row = f"{label:<12}" + "".join(f"{t * 1e3:>12.2f}ms" for t in times)
        if len(times) == 2 and times[1] > 0:
            row += f"{times[0] / times[1]:>12.1f}x"
        out(row)
    return ok


def main(argv=None):
    ap = argparse.ArgumentParser(
        prog="becexp-bench",
        description="compare the pure and compiled becexp backends",
    )
    ap.add_argument("--l", type=int, default=3, help="bit degree (default 3)")
    ap.add_argument("--k", type=int, default=6, help="check degree (default 6)")
    ap.add_argument("--n", type=int, default=6000, help="block length (default 6000)")
    ap.add_argument("--p", type=float, default=0.55, help="erasure probability")
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--reps", type=int, default=3, help="repetitions, best-of timing")
    args = ap.parse_args(argv)
    ok = run(args.l, args.k, args.n, args.p, args.seed, args.reps)
    return 0 if ok else 1


if __name__ == "__main__":
    raise SystemExit(main())
