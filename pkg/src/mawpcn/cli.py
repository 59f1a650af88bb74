"""Command-line entry points: `mawpcn run` and `mawpcn verify`."""

import argparse
import json
import sys

from .baselines import ALL_SCHEMES
from .harness import run_experiment, spec_from_config, summarize, write_csv
from .params import load_config, validate_config
from .verify import run_all_checks, suite_report


def build_parser():
    parser = argparse.ArgumentParser(
        prog="mawpcn",
        description="Movable-antenna wireless-powered network simulator",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run a Monte-Carlo experiment sweep")
    run_p.add_argument("--config", help="JSON config file (defaults used if omitted)")
    run_p.add_argument("--out", default="results.csv", help="output CSV path")
    run_p.add_argument("--trials", type=int, help="override trial count")
    run_p.add_argument("--seed", type=int, help="override master seed")
    run_p.add_argument(
        "--schemes", nargs="+", choices=ALL_SCHEMES, help="subset of schemes to run"
    )
    run_p.add_argument("--workers", type=int, help="parallel trial workers")

    ver_p = sub.add_parser("verify", help="run the randomized verification suite")
    ver_p.add_argument("--seed", type=int, default=0)
    ver_p.add_argument("--instances", type=int, default=5)
    ver_p.add_argument("--out", help="also write the JSON report to this path")
    return parser


def cmd_run(args):
    cfg = load_config(args.config) if args.config else validate_config({})
    spec = spec_from_config(
        cfg,
        trials=args.trials,
        seed=args.seed,
        schemes=tuple(args.schemes) if args.schemes else None,
        workers=args.workers,
    )
    rows = run_experiment(spec)
    write_csv(rows, args.out)
    print(f"wrote {len(rows)} rows to {args.out}")
    for entry in summarize(rows):
        print(
            "{sweep_value!r} {scheme}: mean={mean:.6g} "
            "ci=[{ci_low:.6g}, {ci_high:.6g}] n={n}".format(**entry)
        )
    return 0


def cmd_verify(args):
    reports = run_all_checks(seed=args.seed, instances=args.instances)
    report = suite_report(reports)
    text = json.dumps(report, indent=2)
    print(text)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    return 0 if report["passed"] else 1


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.command == "run":
        return cmd_run(args)
    return cmd_verify(args)


if __name__ == "__main__":
    sys.exit(main())
