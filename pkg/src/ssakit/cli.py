"""Batch command-line front end.

Subcommands: decompose, reconstruct, wcor, autogroup, forecast, gapfill,
estimate, cadzow, rank, detect.  Exit codes: 0 success, 2 usage error,
1 compute error (message on stderr).  The environment variable
``SSAKIT_THREADS`` caps the linear-algebra thread pools.
"""

import argparse
import json
import os
import sys

import numpy as np

from . import io
from .decomposition import SSA
from .detect import mcssa_test
from .forecast import bootstrap_forecast, forecast_recurrent, forecast_vector
from .gapfill import fill_iterative, fill_subspace
from .grouping import cluster_components, periodic_pairs, trend_indices
from .lowrank import cadzow, select_rank
from .model import esprit_roots, estimate_amplitudes


def build_parser():
    parser = argparse.ArgumentParser(prog="ssakit", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, components=False):
        p.add_argument("input", help="input series CSV (one sample per row)")
        p.add_argument("--window", type=int, default=None, help="window length L")
        if components:
            p.add_argument("--components", type=int, default=None,
                           help="number of leading eigentriples")

    p = sub.add_parser("decompose", help="decompose a series into eigentriples")
    common(p, components=True)
    p.add_argument("--method", choices=("basic", "toeplitz"), default="basic")
    p.add_argument("--centering", choices=("none", "double"), default="none")
    p.add_argument("-o", "--output", required=True, help="decomposition JSON path")
    p.set_defaults(handler=cmd_decompose)

    p = sub.add_parser("reconstruct", help="reconstruct groups from a decomposition JSON")
    p.add_argument("input", help="decomposition JSON from the decompose subcommand")
    p.add_argument("--groups", help="grouping JSON {name: [1-based indices]}; "
                                    "default: one group with every triple")
    p.add_argument("-o", "--output", required=True, help="output CSV (one column per group)")
    p.set_defaults(handler=cmd_reconstruct)

    p = sub.add_parser("wcor", help="weighted-correlation matrix of elementary components")
    common(p, components=True)
    p.add_argument("-o", "--output", required=True, help="output CSV matrix")
    p.set_defaults(handler=cmd_wcor)

    p = sub.add_parser("autogroup", help="automatic grouping of eigentriples")
    common(p, components=True)
    p.add_argument("--mode", choices=("cluster", "identify"), default="cluster")
    p.add_argument("--clusters", type=int, default=3, help="group count for cluster mode")
    p.add_argument("--omega0", type=float, default=1 / 24,
                   help="low-frequency cutoff for trend identification")
    p.add_argument("--threshold", type=float, default=0.9,
                   help="periodogram share threshold for trend identification")
    p.add_argument("--share-threshold", type=float, default=0.5,
                   help="dominant-share threshold for sine-pair identification")
    p.add_argument("--freq-tol", type=float, default=None,
                   help="frequency tolerance for sine pairs (default 1/L)")
    p.add_argument("-o", "--output", required=True, help="grouping JSON path")
    p.set_defaults(handler=cmd_autogroup)

    p = sub.add_parser("forecast", help="forecast the leading components")
    common(p)
    p.add_argument("--rank", type=int, required=True, help="signal rank")
    p.add_argument("--horizon", type=int, required=True)
    p.add_argument("--method", choices=("recurrent", "vector"), default="recurrent")
    p.add_argument("--intervals", action="store_true", help="bootstrap prediction intervals")
    p.add_argument("--level", type=float, default=0.95)
    p.add_argument("--surrogates", type=int, default=200, help="bootstrap sample count")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("-o", "--output", required=True,
                   help="output CSV with columns index, point, lower, upper")
    p.set_defaults(handler=cmd_forecast)

    p = sub.add_parser("gapfill", help="fill NA gaps in a series")
    common(p)
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--method", choices=("iterative", "subspace"), default="iterative")
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--max-iter", type=int, default=100)
    p.add_argument("-o", "--output", required=True, help="completed series CSV")
    p.set_defaults(handler=cmd_gapfill)

    p = sub.add_parser("estimate", help="estimate signal parameters (roots, amplitudes)")
    common(p)
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("-o", "--output", required=True, help="signal model JSON")
    p.set_defaults(handler=cmd_estimate)

    p = sub.add_parser("cadzow", help="finite-rank approximation by alternating projections")
    common(p)
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--max-iter", type=int, default=50)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("-o", "--output", required=True, help="approximated series CSV")
    p.set_defaults(handler=cmd_cadzow)

    p = sub.add_parser("rank", help="choose the signal rank by AIC/BIC")
    common(p)
    p.add_argument("--max-rank", type=int, required=True)
    p.add_argument("--criterion", choices=("aic", "bic"), default="bic")
    p.add_argument("--estimator", choices=("cadzow", "ssa"), default="cadzow")
    p.add_argument("-o", "--output", default=None, help="report JSON (default: stdout)")
    p.set_defaults(handler=cmd_rank)

    p = sub.add_parser("detect", help="test for signal presence in red noise")
    common(p)
    p.add_argument("--gamma", type=float, default=0.95)
    p.add_argument("--surrogates", type=int, default=1000)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--correction", choices=("bonferroni", "none"), default="bonferroni")
    p.add_argument("--json", action="store_true", help="JSON report instead of a table")
    p.add_argument("-o", "--output", default=None, help="report path (default: stdout)")
    p.set_defaults(handler=cmd_detect)

    return parser


def _fit(args):
    x = io.read_series_csv(args.input)
    method = args.method if args.command == "decompose" else "basic"
    centering = args.centering if args.command == "decompose" else "none"
    est = SSA(window_length=args.window, n_components=getattr(args, "components", None),
              method=method, centering=centering)
    return est.fit(x), x


def cmd_decompose(args):
    est, _ = _fit(args)
    io.write_decomposition_json(args.output, est.to_dict())


def cmd_reconstruct(args):
    est = SSA.from_dict(io.read_decomposition_json(args.input))
    if args.groups:
        grouping = io.read_grouping_json(args.groups)
    else:
        grouping = {"all": list(range(1, est.n_components_ + 1))}
    series = est.reconstruct(grouping)
    io.write_columns_csv(args.output, series)


def cmd_wcor(args):
    est, _ = _fit(args)
    io.write_matrix_csv(args.output, est.wcor())


def cmd_autogroup(args):
    est, _ = _fit(args)
    if args.mode == "cluster":
        grouping = cluster_components(est.wcor(), args.clusters)
    else:
        grouping = {}
        trend = trend_indices(est, low_freq_cutoff=args.omega0, threshold=args.threshold)
        if trend:
            grouping["trend"] = trend
        taken = set(trend)
        for n, (i, j, freq) in enumerate(
            periodic_pairs(est, freq_tol=args.freq_tol, share_threshold=args.share_threshold),
            start=1,
        ):
            if i in taken or j in taken:
                continue
            grouping[f"periodic_{n}"] = [i, j]
    io.write_grouping_json(args.output, grouping)


def cmd_forecast(args):
    x = io.read_series_csv(args.input)
    if args.intervals:
        result = bootstrap_forecast(x, args.window, rank=args.rank, horizon=args.horizon,
                                    n_surrogates=args.surrogates, level=args.level,
                                    seed=args.seed, method=args.method)
    else:
        est = SSA(window_length=args.window, n_components=args.rank).fit(x)
        fn = forecast_vector if args.method == "vector" else forecast_recurrent
        result = fn(est, range(1, est.n_components_ + 1), args.horizon)
    n = x.size
    nan = np.full(result.values.size, np.nan)
    io.write_columns_csv(args.output, {
        "index": np.arange(n + 1, n + result.values.size + 1, dtype=float),
        "point": result.values,
        "lower": result.lower if result.lower is not None else nan,
        "upper": result.upper if result.upper is not None else nan,
    })


def cmd_gapfill(args):
    x = io.read_series_csv(args.input)
    if args.method == "iterative":
        result = fill_iterative(x, args.window, args.rank, tol=args.tol, max_iter=args.max_iter)
        print(f"filled {len(result.filled)} samples in {result.iterations} iterations"
              f"{'' if result.converged else ' (no convergence)'}")
    else:
        result = fill_subspace(x, args.window, args.rank)
        note = f" ({len(result.one_sided)} one-sided)" if result.one_sided else ""
        print(f"filled {len(result.filled)} samples{note}")
    io.write_series_csv(args.output, result.series)


def cmd_estimate(args):
    x = io.read_series_csv(args.input)
    est = SSA(window_length=args.window, n_components=args.rank).fit(x)
    roots = esprit_roots(est.left_vectors_)
    signal = est.reconstruct(range(1, est.n_components_ + 1))
    model = estimate_amplitudes(signal, roots)
    doc = model.to_dict()
    doc["condition_number"] = model.condition_number
    with open(args.output, "w") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")


def cmd_cadzow(args):
    x = io.read_series_csv(args.input)
    window = args.window if args.window is not None else max(2, int(round(0.4 * x.size)))
    result = cadzow(x, window, args.rank, max_iter=args.max_iter, tol=args.tol)
    print(f"{result.iterations} iterations, rank gap {result.rank_gap:.3e}"
          f"{'' if result.converged else ' (no convergence)'}")
    io.write_series_csv(args.output, result.series)


def cmd_rank(args):
    x = io.read_series_csv(args.input)
    window = args.window if args.window is not None else max(2, int(round(0.4 * x.size)))
    selection = select_rank(x, window, args.max_rank, criterion=args.criterion,
                            estimator=args.estimator)
    doc = selection.to_dict()
    if args.output:
        with open(args.output, "w") as fh:
            json.dump(doc, fh, indent=2)
            fh.write("\n")
    print(f"selected rank {selection.selected} by {selection.criterion}")


def cmd_detect(args):
    x = io.read_series_csv(args.input)
    window = args.window if args.window is not None else 20
    report = mcssa_test(x, window_length=window, gamma=args.gamma,
                        n_surrogates=args.surrogates, seed=args.seed,
                        correction=args.correction)
    text = json.dumps(report.to_dict(), indent=2) if args.json else report.to_text()
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse has already written the usage message
        return int(exc.code) if exc.code else 0

    limit = os.environ.get("SSAKIT_THREADS")
    try:
        if limit:
            from threadpoolctl import threadpool_limits

            with threadpool_limits(limits=int(limit)):
                args.handler(args)
        else:
            args.handler(args)
    except (ValueError, RuntimeError, OSError) as exc:
        print(f"ssakit: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
