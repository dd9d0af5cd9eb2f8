"""Run the acceptance or property suite and write the JSON report.

    python scripts/run_suite.py acceptance --out report.json
"""
import argparse
import sys

from netorient.suite import SUITES, run_suite


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("name", choices=SUITES)
    ap.add_argument("--budget", type=float)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", help="JSON report path (default: stdout only)")
    ap.add_argument("--timings", action="store_true")
    args = ap.parse_args()
    report = run_suite(args.name, args.budget, seed=args.seed)
    for line in report.lines():
        print(line)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(report.to_json(timings=args.timings) + "\n")
    sys.exit(0 if report.passed else 1)


if __name__ == "__main__":
    main()
