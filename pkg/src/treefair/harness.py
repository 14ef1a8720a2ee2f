"""Exhaustive and differential checks of the relation engine against the oracle."""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Iterator, Optional

from .errors import CapacityError
from .matrix import (
    TransitionMatrix,
    all_ktuples_have_common_predecessor,
    has_positive_row,
    is_irreducible,
    max_row_sum,
    parse_matrix,
    power_support,
    primitivity_exponent,
)
from .oracle import DEFAULT_CAPS, Caps, poss_families
from .relations import Status, classify_fairness, run_algorithm

FILTERS = ("no-zero-rows", "primitive-only", "irreducible-only", "s_A<=k")

# Largest d enumerated exhaustively; beyond it a sample size is required.
EXHAUSTIVE_D = 4


@dataclass(frozen=True)
class SweepSpec:
    d_values: tuple[int, ...] = (3,)
    k_values: tuple[int, ...] = (2,)
    n_max: int = 6
    filters: tuple[str, ...] = ("no-zero-rows",)
    max_row_sum: Optional[int] = None
    sample: Optional[int] = None
    seed: int = 0

    def __post_init__(self):
        if not self.d_values or not self.k_values:
            raise ValueError("d and k ranges must be nonempty")
        if min(self.d_values) < 1 or min(self.k_values) < 1:
            raise ValueError("d and k must be at least 1")
        if self.n_max < 1:
            raise ValueError("n_max must be at least 1")
        unknown = set(self.filters) - set(FILTERS)
        if unknown:
            raise ValueError(f"unknown filters {sorted(unknown)}; known: {FILTERS}")


@dataclass(frozen=True)
class Discrepancy:
    """One disagreement, with enough context to replay it.

    ``check`` is one of soundness / completeness / verdict / termination /
    observation.  Completeness findings for k < s_A are recorded but not
    asserted, see :attr:`asserted`.
    """

    matrix: str
    k: int
    kind: str
    check: str
    details: str
    n_max: int
    observation: Optional[str] = None
    n: Optional[int] = None

    @property
    def asserted(self) -> bool:
        if self.check in ("completeness", "verdict-completeness"):
            return self.k >= max_row_sum(parse_matrix(self.matrix))
        return True

    def replay(self, caps: Caps = DEFAULT_CAPS) -> bool:
        """Re-run the check that produced this discrepancy; True if it recurs."""
        A = parse_matrix(self.matrix)
        if self.check == "observation":
            found = check_observations(A, self.k, self.n_max, caps)
        else:
            found = cross_validate(A, self.k, self.n_max, caps)
        return self in found


def _bits_to_matrix(code: int, d: int) -> TransitionMatrix:
    width = d * d
    bits = format(code, f"0{width}b")
    return TransitionMatrix.from_rows(
        [c + 1 for c in range(d) if bits[r * d + c] == "1"] for r in range(d)
    )


def _passes(A: TransitionMatrix, spec: SweepSpec, k: Optional[int]) -> bool:
    f = spec.filters
    if "no-zero-rows" in f and A.zero_rows():
        return False
    if spec.max_row_sum is not None and max_row_sum(A) > spec.max_row_sum:
        return False
    if "s_A<=k" in f:
        bound = k if k is not None else max(spec.k_values)
        if max_row_sum(A) > bound:
            return False
    if "irreducible-only" in f and not is_irreducible(A):
        return False
    if "primitive-only" in f and primitivity_exponent(A) is None:
        return False
    return True


def enumerate_matrices(spec: SweepSpec, k: Optional[int] = None) -> Iterator[TransitionMatrix]:
    """Matrices in increasing order of their row-major bit encoding.

    ``k`` resolves the ``s_A<=k`` filter; it defaults to the largest k in the spec.
    """
    for d in sorted(spec.d_values):
        total = 1 << (d * d)
        if spec.sample is not None:
            rng = random.Random(f"{spec.seed}:{d}")
            if d <= EXHAUSTIVE_D:
                codes = sorted(rng.sample(range(total), min(spec.sample, total)))
            else:
                codes = sorted({rng.randrange(total) for _ in range(spec.sample)})
        elif d <= EXHAUSTIVE_D:
            codes = range(total)
        else:
            raise CapacityError("exhaustive d", EXHAUSTIVE_D, d)
        for code in codes:
            A = _bits_to_matrix(code, d)
            if _passes(A, spec, k):
                yield A


def cross_validate(
    A: TransitionMatrix, k: int, n_max: int, caps: Caps = DEFAULT_CAPS
) -> list[Discrepancy]:
    """Compare the algorithm's discoveries and verdict with the oracle.

    Soundness: each discovery at round h must hold at depth h (any k).
    Completeness: each oracle relation of degree <= n_max must be discovered
    at exactly that round.  Relations of larger degree are left unchecked.
    """
    A.require_nonempty_rows()
    text = A.render()
    result = run_algorithm(A)
    verdict = classify_fairness(A, k, result)
    R = result.relations
    heights = [R[i, j] for i in A.symbols for j in A.symbols if i != j and R[i, j]]
    depth = min(max([n_max + 1, *heights]), caps.max_depth)
    fams = poss_families(A, k, depth, caps)
    pairs = [f.relation_pairs() for f in fams]
    out = []

    def add(kind, check, details):
        out.append(Discrepancy(text, k, kind, check, details, n_max))

    if result.discovery_rounds > A.d**2:
        add("proposition violation", "termination",
            f"{result.discovery_rounds} discovery rounds exceed d^2 = {A.d ** 2}")

    for i in A.symbols:
        for j in A.symbols:
            h = R[i, j]
            if i == j or not h or h > depth:
                continue
            if (i, j) not in pairs[h]:
                add("wrong height", "soundness",
                    f"{i} => {j} discovered at round {h} but fails at depth {h}")

    degrees = {}
    for n in range(n_max + 1):
        for pair in pairs[n]:
            degrees.setdefault(pair, n)
    for (i, j), deg in sorted(degrees.items()):
        if i == j:
            continue
        h = R[i, j]
        if not h:
            add("missing relation", "completeness", f"{i} => {j} has degree {deg} but was not discovered")
        elif h != deg:
            add("wrong height", "completeness", f"{i} => {j} has degree {deg} but height {h}")

    fair_at = [f.is_fair() for f in fams]
    if verdict.status is Status.FAIR:
        n0 = verdict.n_min
        if n0 <= depth and not fair_at[n0]:
            add("verdict mismatch", "verdict", f"FAIR from n = {n0} but oracle says not in P(k, {n0})")
        if verdict.provenance == "completeness-theorem" and 1 <= n0 - 1 <= depth and fair_at[n0 - 1]:
            add("verdict mismatch", "verdict-completeness",
                f"n_min = {n0} but oracle already has A in P(k, {n0 - 1})")
    elif verdict.status is Status.NOT_FAIR:
        hits = [n for n in range(1, n_max + 1) if fair_at[n]]
        if hits:
            add("verdict mismatch", "verdict-completeness", f"NOT_FAIR but oracle has A in P(k, {hits[0]})")
    return out


def check_observations(
    A: TransitionMatrix, k: int, n_max: int, caps: Caps = DEFAULT_CAPS
) -> list[Discrepancy]:
    """Structural facts about P(k, n) and P*(k, n) for one matrix, n = 1..n_max."""
    A.require_nonempty_rows()
    text = A.render()
    fams = poss_families(A, k, n_max + 1, caps)
    wider = poss_families(A, k + 1, n_max, caps) if k + 1 <= caps.max_k else None
    common = all_ktuples_have_common_predecessor(A, k)
    positive_row = has_positive_row(A)
    out = []

    def add(name, n, details):
        out.append(Discrepancy(text, k, "proposition violation", "observation", details, n_max, name, n))

    for n in range(1, n_max + 1):
        fair, star = fams[n].is_fair(), fams[n].is_complete()
        power_full = bool(power_support(A, n).all())
        if star and not fair:
            add("complete-implies-fair", n, "in P* but not in P")
        if fair and not power_full:
            add("fair-implies-primitive", n, f"in P(k, {n}) but A^{n} has a zero entry")
        if wider is not None and wider[n].is_fair() and not fair:
            add("dimension-monotone", n, f"in P({k + 1}, {n}) but not in P({k}, {n})")
        if fair and not fams[n + 1].is_fair():
            add("depth-monotone", n, f"in P({k}, {n}) but not in P({k}, {n + 1})")
        if power_full and positive_row and not fams[n + 1].is_fair():
            add("positive-row-sufficient", n, f"A^{n} > 0 with a positive row but not in P(k, {n + 1})")
        if star != (fair and common):
            add("common-predecessor", n,
                f"P* = {star}, P = {fair}, common predecessors = {common}")

    exponent = primitivity_exponent(A)
    if A.d == k + 1 and exponent is not None:
        top = min(exponent + 2, caps.max_depth)
        star_somewhere = any(f.is_complete() for f in poss_families(A, k, top, caps)[1:])
        if star_somewhere != positive_row:
            add("positive-row-characterization", None,
                f"P*(k, n) for some n <= {top} is {star_somewhere}, positive row is {positive_row}")
    return out


THREE_CYCLE = "011|100|010"


def check_three_cycle(n_max: int, caps: Caps = DEFAULT_CAPS) -> list[Discrepancy]:
    """[011|100|010] with k = 2 is in no P(2, n): verdict NOT_FAIR and no oracle hit."""
    A = parse_matrix(THREE_CYCLE)
    out = []
    verdict = classify_fairness(A, 2)
    if verdict.status is not Status.NOT_FAIR:
        out.append(Discrepancy(THREE_CYCLE, 2, "verdict mismatch", "observation",
                               f"expected NOT_FAIR, got {verdict.status.value}", n_max, "three-cycle-not-fair"))
    for n, fam in enumerate(poss_families(A, 2, n_max, caps)):
        if n and fam.is_fair():
            out.append(Discrepancy(THREE_CYCLE, 2, "proposition violation", "observation",
                                   f"oracle has A in P(2, {n})", n_max, "three-cycle-not-fair", n))
    return out


def verify_observations(spec: SweepSpec, caps: Caps = DEFAULT_CAPS) -> list[Discrepancy]:
    forced = SweepSpec(spec.d_values, spec.k_values, spec.n_max,
                       tuple(dict.fromkeys((*spec.filters, "no-zero-rows"))),
                       spec.max_row_sum, spec.sample, spec.seed)
    out = []
    for k in spec.k_values:
        for A in enumerate_matrices(forced, k):
            out.extend(check_observations(A, k, spec.n_max, caps))
    out.extend(check_three_cycle(spec.n_max, caps))
    return out


@dataclass(frozen=True)
class SweepEntry:
    matrix: str
    k: int
    verdict: str
    n_min: Optional[int]
    discovery_rounds: int
    discrepancies: tuple[Discrepancy, ...] = field(default_factory=tuple)


@dataclass(frozen=True)
class SweepReport:
    spec: SweepSpec
    entries: tuple[SweepEntry, ...]

    @property
    def failures(self) -> list[Discrepancy]:
        return [x for e in self.entries for x in e.discrepancies if x.asserted]

    @property
    def informational(self) -> list[Discrepancy]:
        return [x for e in self.entries for x in e.discrepancies if not x.asserted]

    def summary(self) -> str:
        return (
            f"matrices={len({e.matrix for e in self.entries})} runs={len(self.entries)} "
            f"failures={len(self.failures)} unasserted={len(self.informational)}"
        )

    def to_dict(self) -> dict:
        return {
            "spec": asdict(self.spec),
            "entries": [
                {
                    "matrix": e.matrix,
                    "k": e.k,
                    "verdict": e.verdict,
                    "n_min": e.n_min,
                    "discovery_rounds": e.discovery_rounds,
                    "discrepancies": [asdict(x) | {"asserted": x.asserted} for x in e.discrepancies],
                }
                for e in self.entries
            ],
            "summary": self.summary(),
        }


def _sweep_one(args) -> SweepEntry:
    text, k, n_max, caps = args
    A = parse_matrix(text)
    result = run_algorithm(A)
    verdict = classify_fairness(A, k, result)
    found = cross_validate(A, k, n_max, caps)
    return SweepEntry(text, k, verdict.status.value, verdict.n_min, result.discovery_rounds, tuple(found))


def run_sweep(spec: SweepSpec, caps: Caps = DEFAULT_CAPS, workers: int = 1) -> SweepReport:
    """Cross-validate every (matrix, k) in the sweep; order follows the enumeration."""
    forced = SweepSpec(spec.d_values, spec.k_values, spec.n_max,
                       tuple(dict.fromkeys((*spec.filters, "no-zero-rows"))),
                       spec.max_row_sum, spec.sample, spec.seed)
    jobs = [
        (A.render(), k, spec.n_max, caps)
        for k in spec.k_values
        for A in enumerate_matrices(forced, k)
    ]
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            entries = list(pool.map(_sweep_one, jobs, chunksize=32))
    else:
        entries = [_sweep_one(job) for job in jobs]
    return SweepReport(spec, tuple(entries))
