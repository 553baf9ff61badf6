"""Command-line front end.

Subcommands: thresholds, exponent, curve, rlc, simulate.  All numeric
output uses 12 significant digits (thresholds: 10 decimals), UTF-8 and
LF line endings.  Exit codes: 0 success, 2 usage, 3 the requested
quantity does not exist in this regime (or a domain error), 4 numerical
non-convergence, 5 I/O failure.
"""

import argparse
import sys

from .density_evolution import find_p_c, find_p_d
from .errors import (
    DivisibilityError,
    DomainError,
    ExtrapolationUnstable,
    GraphConstructionError,
    NonConvergence,
    NoZeroEntropySolution,
)
from .gf2 import EnsembleParams, sample_regular_matrix
from .large_deviation import (
    average_exponent,
    find_p_1rsb,
    rate_curve,
    typical_exponent,
)
from .rlc import rlc_average_exponent, rlc_p_e, rlc_p_y, rlc_typical_exponent
from .simulate import histogram_csv, run_monte_carlo, stats_csv


class _UsageError(Exception):
    """Bad argument combination detected after parsing."""


def _fmt(v):
    return format(float(v), ".12g")


def _ensemble(args):
    try:
        return EnsembleParams(args.l, args.k).validate()
    except DomainError as exc:
        raise _UsageError(str(exc)) from exc


def _write_text(path, text):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def cmd_thresholds(args):
    params = _ensemble(args)
    tol = args.tol
    if not tol > 0.0:
        raise _UsageError(f"tol must be positive, got {tol}")
    lines = [
        ("p_1rsb", find_p_1rsb(params, max(tol, 1e-8))),
        ("p_d", find_p_d(params, tol)),
        ("p_c", find_p_c(params, tol)),
    ]
    for name, value in lines:
        sys.stdout.write(f"{name},{value:.10f}\n")
    return 0


def cmd_exponent(args):
    params = _ensemble(args)
    if args.typical:
        value = typical_exponent(params, args.p)
    else:
        value = average_exponent(params, args.p)
    sys.stdout.write(_fmt(value) + "\n")
    return 0


def cmd_curve(args):
    params = _ensemble(args)
    if args.steps < 2:
        raise _UsageError(f"need at least 2 steps, got {args.steps}")
    if not args.x_min < args.x_max:
        raise _UsageError("need x-min < x-max")
    curve = rate_curve(params, args.p, args.x_min, args.x_max, args.steps)
    lines = ["x,s_cav,L1,phi"]
    for sample in curve:
        lines.append(
            ",".join(_fmt(v) for v in (sample.x, sample.s_cav, sample.l1, sample.phi))
        )
    text = "\n".join(lines) + "\n"
    if args.out:
        _write_text(args.out, text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_rlc(args):
    if not 0.0 < args.R < 1.0:
        raise _UsageError(f"rate must be in (0,1), got {args.R}")
    if args.steps < 2:
        raise _UsageError(f"need at least 2 steps, got {args.steps}")
    if not args.p_min < args.p_max:
        raise _UsageError("need p-min < p-max")
    p_e = rlc_p_e(args.R)
    p_y = rlc_p_y(args.R)
    span = (args.p_max - args.p_min) / (args.steps - 1)
    lines = ["p,E_av,E_typ,p_e,p_y"]
    for i in range(args.steps):
        p = args.p_min + i * span
        lines.append(
            ",".join(
                _fmt(v)
                for v in (
                    p,
                    rlc_average_exponent(args.R, p),
                    rlc_typical_exponent(args.R, p),
                    p_e,
                    p_y,
                )
            )
        )
    text = "\n".join(lines) + "\n"
    if args.out:
        _write_text(args.out, text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_simulate(args):
    params = _ensemble(args)
    if args.trials < 1:
        raise _UsageError(f"need at least one trial, got {args.trials}")
    if args.threads < 1:
        raise _UsageError(f"need at least one thread, got {args.threads}")
    if args.dump_matrix:
        matrix = sample_regular_matrix(params, args.n, args.seed)
        matrix.dump(args.dump_matrix)
    report = run_monte_carlo(
        params,
        args.n,
        args.p,
        args.trials,
        args.seed,
        matrix_mode=args.matrix_mode,
        threads=args.threads,
    )
    if args.out:
        _write_text(args.out + ".stats.csv", stats_csv(report))
        _write_text(args.out + ".hist.csv", histogram_csv(report))
    else:
        sys.stdout.write(stats_csv(report))
    return 0


def build_parser():
    ap = argparse.ArgumentParser(
        prog="becexp",
        description=(
            "Maximum-likelihood erasure-decoding analysis of regular LDPC "
            "codes: thresholds, error exponents, entropic rate curves, the "
            "random-linear-code limit, and Monte-Carlo validation."
        ),
    )
    sub = ap.add_subparsers(dest="command", required=True)

    t = sub.add_parser("thresholds", help="print p_1rsb, p_d, p_c for an ensemble")
    t.add_argument("--l", type=int, required=True, help="bit (variable) degree")
    t.add_argument("--k", type=int, required=True, help="check degree")
    t.add_argument("--tol", type=float, default=1e-10, help="bisection tolerance")
    t.set_defaults(func=cmd_thresholds)

    e = sub.add_parser("exponent", help="average or typical error exponent at one p")
    e.add_argument("--l", type=int, required=True, help="bit (variable) degree")
    e.add_argument("--k", type=int, required=True, help="check degree")
    e.add_argument("--p", type=float, required=True, help="erasure probability")
    e.add_argument(
        "--typical",
        action="store_true",
        help="typical (single-code) exponent instead of the ensemble average",
    )
    e.set_defaults(func=cmd_exponent)

    c = sub.add_parser("curve", help="entropic rate curve samples as CSV")
    c.add_argument("--l", type=int, required=True, help="bit (variable) degree")
    c.add_argument("--k", type=int, required=True, help="check degree")
    c.add_argument("--p", type=float, required=True, help="erasure probability")
    c.add_argument("--x-min", type=float, default=-1.0, help="left end of the x grid")
    c.add_argument("--x-max", type=float, default=2.0, help="right end of the x grid")
    c.add_argument("--steps", type=int, default=61, help="number of grid points")
    c.add_argument("--out", help="output CSV path (default: stdout)")
    c.set_defaults(func=cmd_curve)

    r = sub.add_parser("rlc", help="random-linear-code exponents over a p range")
    r.add_argument("--R", type=float, required=True, help="code rate in (0,1)")
    r.add_argument("--p-min", type=float, default=0.01)
    r.add_argument("--p-max", type=float, default=0.6)
    r.add_argument("--steps", type=int, default=60, help="number of grid points")
    r.add_argument("--out", help="output CSV path (default: stdout)")
    r.set_defaults(func=cmd_rlc)

    s = sub.add_parser("simulate", help="Monte-Carlo peeling + exact entropy run")
    s.add_argument("--l", type=int, required=True, help="bit (variable) degree")
    s.add_argument("--k", type=int, required=True, help="check degree")
    s.add_argument("--n", type=int, required=True, help="block length")
    s.add_argument("--p", type=float, required=True, help="erasure probability")
    s.add_argument("--trials", type=int, required=True, help="number of trials")
    s.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    s.add_argument(
        "--matrix-mode",
        choices=("fixed", "resampled"),
        default="resampled",
        help="one fixed matrix for all trials, or a fresh matrix per trial",
    )
    s.add_argument("--threads", type=int, default=1, help="worker threads (default 1)")
    s.add_argument(
        "--out",
        help="output prefix: writes PREFIX.stats.csv and PREFIX.hist.csv "
        "(default: stats to stdout)",
    )
    s.add_argument(
        "--dump-matrix",
        help="also write the seed's fixed matrix to this path as text",
    )
    s.set_defaults(func=cmd_simulate)
    return ap


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return 2
    except NoZeroEntropySolution:
        sys.stderr.write("no-zero-entropy-solution\n")
        return 3
    except (DomainError, DivisibilityError) as exc:
        sys.stderr.write(f"domain error: {exc}\n")
        return 3
    except (NonConvergence, ExtrapolationUnstable, GraphConstructionError) as exc:
        sys.stderr.write(f"numerical failure: {exc}\n")
        return 4
    except OSError as exc:
        sys.stderr.write(f"i/o error: {exc}\n")
        return 5


if __name__ == "__main__":
    raise SystemExit(main())
