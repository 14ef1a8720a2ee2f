"""Run the standard cross-validation sweeps and print a timing table.

    python3 scripts/run_sweeps.py [--workers N] [--json out.json]
"""

import argparse
import json
import time
from dataclasses import dataclass

from treefair.harness import SweepSpec, run_sweep, verify_observations


@dataclass(frozen=True)
class Experiment:
    name: str
    spec: SweepSpec
    observations: bool = False


EXPERIMENTS = [
    Experiment("exact, d=3, s_A<=k, k=2", SweepSpec((3,), (2,), 6, ("no-zero-rows", "s_A<=k"))),
    Experiment("all d=3, k=1..3", SweepSpec((3,), (1, 2, 3), 4)),
    Experiment("all d=2, k=1..4", SweepSpec((2,), (1, 2, 3, 4), 5)),
    Experiment("sample d=4, k=2..3", SweepSpec((4,), (2, 3), 3, sample=300, seed=1)),
    Experiment("structure d<=3, k=1..2", SweepSpec((1, 2, 3), (1, 2), 3), observations=True),
    Experiment("structure d<=3 irreducible", SweepSpec((1, 2, 3), (1, 2), 3, ("irreducible-only",)), observations=True),
]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--json", help="write per-experiment results here")
    args = ap.parse_args()
    rows = []
    for ex in EXPERIMENTS:
        start = time.perf_counter()
        if ex.observations:
            found = verify_observations(ex.spec)
            by_name = {}
            for x in found:
                by_name[x.observation] = by_name.get(x.observation, 0) + 1
            summary = f"violations={len(found)} {by_name or ''}".strip()
        else:
            report = run_sweep(ex.spec, workers=args.workers)
            summary = report.summary()
        elapsed = time.perf_counter() - start
        rows.append({"experiment": ex.name, "seconds": round(elapsed, 3), "summary": summary})
        print(f"{ex.name:32s} {elapsed:8.2f}s  {summary}")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(rows, fh, indent=2)


if __name__ == "__main__":
    main()
