"""Time orientation of chained-blob networks and fit the log-log slope.

    python scripts/linearity.py --sizes 1000 10000 100000 --repeats 5
"""
import argparse

from netorient.suite import linearity_slope


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[1_000, 10_000, 100_000])
    ap.add_argument("--repeats", type=int, default=5)
    args = ap.parse_args()
    slope, points = linearity_slope(tuple(args.sizes), args.repeats)
    for n, secs in points:
        print(f"edges={n:>8d}  best={secs * 1e3:9.3f} ms  per_edge={secs / n * 1e9:7.1f} ns")
    print(f"slope={slope:.3f}")


if __name__ == "__main__":
    main()
