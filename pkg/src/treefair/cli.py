"""Command-line front end.

    treefair analyze '110|001|100' --k 2 --trace
    treefair oracle '0111|1011|1101|1110' --k 2 --depth 3
    treefair sweep --d 3 --k 2 --filter 's_A<=k' --n-max 6
    treefair examples

``analyze`` exits 0 for FAIR, 1 for NOT_FAIR, 2 for INCONCLUSIVE and 3 on
errors.  Other commands exit 0 on success, 1 when a check fails, 3 on errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from .errors import TreeFairError
from .harness import FILTERS, SweepSpec, run_sweep, verify_observations
from .matrix import parse_matrix
from .oracle import Caps, oracle_degrees, poss_families, render_configuration
from .fixtures import run_fixtures
from .report import analyze

EXIT_ERROR = 3


class _Parser(argparse.ArgumentParser):
    # Usage errors must not collide with the INCONCLUSIVE exit code.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _read_matrix(args):
    if args.file:
        with open(args.file) as fh:
            return parse_matrix(fh.read())
    if not args.matrix:
        raise TreeFairError("a matrix argument or --file is required")
    return parse_matrix(args.matrix)


def _caps(args) -> Caps:
    return Caps.from_env().with_overrides(getattr(args, "caps", None))


def _cmd_analyze(args) -> int:
    A = _read_matrix(args)
    report = analyze(A, args.k, oracle_depth=args.oracle_depth, trace=args.trace, caps=_caps(args))
    if args.format == "machine":
        sys.stdout.write(report.render_machine())
    else:
        sys.stdout.write(report.render_text())
    return report.exit_code


def _cmd_oracle(args) -> int:
    A = _read_matrix(args)
    A.require_nonempty_rows()
    caps = _caps(args)
    fams = poss_families(A, args.k, args.depth, caps)
    degrees = oracle_degrees(A, args.k, args.depth, caps)
    levels = []
    for fam in fams:
        levels.append({
            "n": fam.n,
            "poss_sets": sorted(
                render_configuration(sorted(s), A.d) if s else "-" for s in fam.sets
            ),
            "in_P": fam.is_fair() if fam.n else None,
            "in_P_star": fam.is_complete() if fam.n else None,
            "relations": [f"{i}=>{j}" for i, j in sorted(fam.relation_pairs())],
        })
    doc = {
        "matrix": A.render(),
        "k": args.k,
        "depth": args.depth,
        "levels": levels,
        "degrees": {f"{i}=>{j}": deg for (i, j), deg in sorted(degrees.items())},
    }
    if args.format == "machine":
        sys.stdout.write(json.dumps(doc, indent=2) + "\n")
    else:
        print(f"matrix [{doc['matrix']}], k={args.k}")
        for lv in levels:
            flags = "" if lv["n"] == 0 else f" P={lv['in_P']} P*={lv['in_P_star']}"
            print(f"n={lv['n']}:{flags} Q={{{', '.join(lv['poss_sets'])}}}")
            print(f"  relations {' '.join(lv['relations'])}")
        print("degrees " + " ".join(f"{p}:{d}" for p, d in doc["degrees"].items()))
    return 0


def _cmd_sweep(args) -> int:
    filters = tuple(dict.fromkeys(["no-zero-rows", *(args.filter or [])]))
    spec = SweepSpec(
        d_values=tuple(args.d),
        k_values=tuple(args.k),
        n_max=args.n_max,
        filters=filters,
        max_row_sum=args.max_row_sum,
        sample=args.sample,
        seed=args.seed,
    )
    caps = _caps(args)
    report = run_sweep(spec, caps, workers=args.workers)
    observations = verify_observations(spec, caps) if args.observations else []
    failures = len(report.failures) + len(observations)
    if args.format == "machine":
        doc = report.to_dict()
        if args.observations:
            doc["observations"] = [vars(x) for x in observations]
        sys.stdout.write(json.dumps(doc, indent=2) + "\n")
    else:
        for x in report.failures + observations:
            print(f"[{x.check}] [{x.matrix}] k={x.k}: {x.kind}: {x.details}")
        line = report.summary()
        if args.observations:
            line += f" observation_violations={len(observations)}"
        print(line)
    return 1 if failures else 0


def _cmd_examples(args) -> int:
    outcomes = run_fixtures()
    for o in outcomes:
        status = "PASS" if o.ok else "FAIL"
        print(f"{status} {o.name}: expected {o.expected}, actual {o.actual}")
    bad = sum(not o.ok for o in outcomes)
    print(f"{len(outcomes) - bad}/{len(outcomes)} fixtures passed")
    return 1 if bad else 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="treefair", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def matrix_args(p):
        p.add_argument("matrix", nargs="?", help="rows over {0,1} joined by '|', e.g. 110|001|100")
        p.add_argument("--file", help="read the matrix from a file, one row per line")
        p.add_argument("--format", choices=("text", "machine"), default="text")
        p.add_argument("--caps", help="cap overrides, e.g. d=8,k=4,n=12,leaves=1000000")

    p = sub.add_parser("analyze", help="run the relation algorithm and classify fairness")
    matrix_args(p)
    p.add_argument("--k", type=int, required=True, help="tree dimension")
    p.add_argument("--trace", action="store_true", help="print the round-by-round trace")
    p.add_argument("--oracle-depth", type=int, help="also run the exact oracle for n <= N")
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("oracle", help="exact Poss families, relations and degrees")
    matrix_args(p)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--depth", type=int, default=3)
    p.set_defaults(func=_cmd_oracle)

    p = sub.add_parser("sweep", help="cross-validate algorithm and oracle over many matrices")
    p.add_argument("--d", type=int, action="append", help="alphabet size (repeatable)")
    p.add_argument("--k", type=int, action="append", help="tree dimension (repeatable)")
    p.add_argument("--n-max", type=int, default=6)
    p.add_argument("--filter", action="append", choices=FILTERS)
    p.add_argument("--max-row-sum", type=int)
    p.add_argument("--sample", type=int, help="random sample size per d instead of all matrices")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--observations", action="store_true", help="also check the structural observations")
    p.add_argument("--format", choices=("text", "machine"), default="text")
    p.add_argument("--caps")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("examples", help="run the built-in regression fixtures")
    p.set_defaults(func=_cmd_examples)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "sweep":
        args.d = args.d or [2]
        args.k = args.k or [2]
    try:
        return args.func(args)
    except (TreeFairError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
