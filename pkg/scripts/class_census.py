"""Count how often random binary networks are orientable in each class.

For each reticulation number, draws undirected networks and reports the share
that admit an orientation in each named class (blob algorithm).

    python scripts/class_census.py --count 50 --max-k 4
"""
import argparse
from collections import Counter

from netorient.class_orient import c_orientation
from netorient.classes import NAMED_CLASSES, NetworkClass
from netorient.generate import random_undirected


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=50)
    ap.add_argument("--max-k", type=int, default=4)
    ap.add_argument("--leaves", type=int, default=6)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    print("k  " + "  ".join(f"{t:>20s}" for t in NAMED_CLASSES))
    for k in range(1, args.max_k + 1):
        hits = Counter()
        for i in range(args.count):
            net = random_undirected(args.seed + i, leaves=args.leaves, reticulations=k)
            for tag in NAMED_CLASSES:
                hits[tag] += c_orientation(net, NetworkClass(tag)).found
        print(f"{k:<2d} " + "  ".join(f"{hits[t] / args.count:20.2f}" for t in NAMED_CLASSES))


if __name__ == "__main__":
    main()
