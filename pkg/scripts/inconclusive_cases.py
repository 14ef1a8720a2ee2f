"""List matrices the relation algorithm leaves INCONCLUSIVE, with the oracle's answer.

    python3 scripts/inconclusive_cases.py --d 3 --k 2 --depth 6
"""

import argparse
from collections import Counter

from treefair.harness import SweepSpec, enumerate_matrices
from treefair.oracle import poss_families
from treefair.relations import Status, classify_fairness


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--d", type=int, default=3)
    ap.add_argument("--k", type=int, default=2)
    ap.add_argument("--depth", type=int, default=6)
    ap.add_argument("--sample", type=int)
    ap.add_argument("--quiet", action="store_true", help="print only the tally")
    args = ap.parse_args()

    spec = SweepSpec((args.d,), (args.k,), args.depth, sample=args.sample)
    tally = Counter()
    for A in enumerate_matrices(spec, args.k):
        if classify_fairness(A, args.k).status is not Status.INCONCLUSIVE:
            continue
        fams = poss_families(A, args.k, args.depth)
        fair_from = next((f.n for f in fams[1:] if f.is_fair()), None)
        complete_from = next((f.n for f in fams[1:] if f.is_complete()), None)
        tally["fair" if fair_from else "not fair up to depth"] += 1
        if not args.quiet:
            print(f"[{A.render()}] fair from n={fair_from} complete from n={complete_from}")
    print(dict(tally))


if __name__ == "__main__":
    main()
