"""Command-line entry point: `subcover run` sweeps, `subcover plot` aggregates."""

from __future__ import annotations

import argparse
import sys

from .harness import ALGORITHMS, ExperimentGrid, emit_plot_data, run_experiment

_METRICS = {"f": "f_value", "size": "size", "queries": "queries"}


def _floats(text):
    return tuple(float(x) for x in text.split(",") if x.strip())


def _ints(text):
    return tuple(int(x) for x in text.split(",") if x.strip())


def _names(text):
    names = tuple(x.strip() for x in text.split(",") if x.strip())
    for name in names:
        if name not in ALGORITHMS:
            raise argparse.ArgumentTypeError(
                f"unknown algorithm {name!r}; choose from {', '.join(ALGORITHMS)}"
            )
    return names


def build_parser():
    parser = argparse.ArgumentParser(
        prog="subcover",
        description="Submodular cover experiment harness.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    run_p = commands.add_parser("run", help="execute a sweep and write a results CSV")
    run_p.add_argument("--dataset", required=True,
                       help="file path (tags/edges) or key=value string (synthetic/tightness)")
    run_p.add_argument("--kind", required=True,
                       choices=("tags", "edges", "synthetic", "tightness"))
    run_p.add_argument("--alg", required=True, type=_names,
                       help=f"comma list from: {', '.join(ALGORITHMS)}")
    run_p.add_argument("--eps", required=True, type=_floats, help="comma list of eps values")
    run_p.add_argument("--tau-frac", required=True, type=_floats,
                       help="comma list of threshold fractions of the reference value")
    run_p.add_argument("--alpha", type=float, default=0.1)
    run_p.add_argument("--delta", type=float, default=0.1)
    run_p.add_argument("--seeds", type=_ints, default=(0,), help="comma list of seeds")
    run_p.add_argument("--sub", choices=("rg", "dg", "ex", "fex"), default="ex",
                       help="maximization subroutine for the stream algorithm")
    run_p.add_argument("--jobs", type=int, default=1)
    run_p.add_argument("--out", required=True)
    run_p.add_argument("--reps", type=int, default=1)
    run_p.add_argument("--ref-seed", type=int, default=0,
                       help="seed of the double-greedy threshold reference on graphs")
    run_p.add_argument("--guess", choices=("tau-ratio", "geometric"), default="tau-ratio",
                       help="initial optimum-size guess for stoch/convert")
    run_p.add_argument("--sub-timeout-ms", type=float, default=300000.0)
    run_p.add_argument("--stable-output", action="store_true",
                       help="zero the wall_ms column so reruns are byte-identical")

    plot_p = commands.add_parser("plot", help="aggregate a results CSV into TSV plot data")
    plot_p.add_argument("--in", dest="csv_in", required=True)
    plot_p.add_argument("--x", choices=("eps", "tau"), required=True)
    plot_p.add_argument("--metric", choices=tuple(_METRICS), required=True)
    plot_p.add_argument("--out", required=True)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            grid = ExperimentGrid(
                dataset=args.dataset,
                kind=args.kind,
                algorithms=args.alg,
                eps_values=args.eps,
                tau_fractions=args.tau_frac,
                alpha=args.alpha,
                delta=args.delta,
                seeds=args.seeds,
                subroutine=args.sub,
                repetitions=args.reps,
                jobs=args.jobs,
                ref_seed=args.ref_seed,
                guess_mode=args.guess,
                sub_timeout_ms=args.sub_timeout_ms,
            )
            rows = run_experiment(grid, args.out, stable_output=args.stable_output)
            errors = sum(1 for row in rows if row.status.startswith("Error"))
            print(f"wrote {len(rows)} rows to {args.out}" + (f" ({errors} errored)" if errors else ""))
            return 1 if errors else 0
        emit_plot_data(args.csv_in, args.x, _METRICS[args.metric], args.out)
        print(f"wrote plot data to {args.out}")
        return 0
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
