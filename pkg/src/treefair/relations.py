"""Round-based discovery of replacement relations i => j.

Round 0 starts from the identity.  Round n + 1 marks (i, j) whenever every
a in S(i) has some b in S(j) with a => b already known after round n.  The
check only reads the previous round's table, so relations found in a round
cannot feed the same round.  Discovery is sound for every tree dimension k;
when k >= s_A it is also complete and the discovery round of each relation
equals its degree.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .errors import MatrixParseError, MovePreconditionError
from .matrix import TransitionMatrix, max_row_sum, render_subset


@dataclass(frozen=True)
class RelationMatrix:
    """d x d table of discovery rounds; 0 means not (yet) known.

    Diagonal entries are stored as 1 even though i => i has height 0.
    """

    entries: tuple[tuple[int, ...], ...]

    @classmethod
    def identity(cls, d: int) -> "RelationMatrix":
        return cls(tuple(tuple(int(i == j) for j in range(d)) for i in range(d)))

    @classmethod
    def parse(cls, text: str) -> "RelationMatrix":
        """Inverse of :meth:`render`; accepts ``"[143|212|141]"`` or ``"1,4,10|..."``."""
        body = text.strip().removeprefix("[").removesuffix("]")
        rows = body.split("|")
        parsed = []
        for r, row in enumerate(rows, start=1):
            cells = row.split(",") if "," in row else list(row)
            try:
                parsed.append(tuple(int(c) for c in cells))
            except ValueError as exc:
                raise MatrixParseError(f"bad relation entry in {row!r}", row=r) from exc
            if len(parsed[-1]) != len(rows):
                raise MatrixParseError("relation matrix is not square", row=r)
        return cls(tuple(parsed))

    @property
    def d(self) -> int:
        return len(self.entries)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i - 1][j - 1]

    def known(self, i: int, j: int) -> bool:
        return self[i, j] > 0

    def known_masks(self) -> list[int]:
        """For each a (0-based position), the bitmask of b with a => b known."""
        out = []
        for row in self.entries:
            m = 0
            for b, v in enumerate(row):
                if v:
                    m |= 1 << b
            out.append(m)
        return out

    def pairs(self) -> frozenset[tuple[int, int]]:
        return frozenset(
            (i + 1, j + 1)
            for i, row in enumerate(self.entries)
            for j, v in enumerate(row)
            if v
        )

    def with_discoveries(self, pairs: Iterable[tuple[int, int]], round_index: int) -> "RelationMatrix":
        rows = [list(r) for r in self.entries]
        for i, j in pairs:
            if rows[i - 1][j - 1]:
                raise ValueError(f"relation {i} => {j} is already known")
            rows[i - 1][j - 1] = round_index
        return RelationMatrix(tuple(tuple(r) for r in rows))

    def off_diagonal_max(self) -> int:
        return max(
            (v for i, row in enumerate(self.entries) for j, v in enumerate(row) if i != j),
            default=0,
        )

    def all_positive(self) -> bool:
        return all(v > 0 for row in self.entries for v in row)

    def render(self) -> str:
        wide = any(v >= 10 for row in self.entries for v in row)
        sep = "," if wide else ""
        return "[" + "|".join(sep.join(str(v) for v in row) for row in self.entries) + "]"

    def __str__(self) -> str:
        return self.render()


@dataclass(frozen=True)
class Discovery:
    """Relation i => j found in a round, with the witness b(a) for each a in S(i)."""

    i: int
    j: int
    witness: tuple[tuple[int, int], ...]

    @property
    def moves(self) -> tuple[tuple[int, int], ...]:
        return tuple((a, b) for a, b in self.witness if a != b)


@dataclass(frozen=True)
class RoundTrace:
    round_index: int
    discoveries: tuple[Discovery, ...]

    @property
    def pairs(self) -> frozenset[tuple[int, int]]:
        return frozenset((x.i, x.j) for x in self.discoveries)


@dataclass(frozen=True)
class AlgorithmResult:
    matrix: TransitionMatrix
    relations: RelationMatrix
    rounds: tuple[RoundTrace, ...]
    stalled_at: int
    all_positive: bool
    max_height: Optional[int]

    @property
    def discovery_rounds(self) -> int:
        return sum(1 for r in self.rounds if r.discoveries)

    def history(self) -> list[RelationMatrix]:
        """R_0, R_1, ..., R_{stalled_at - 1}."""
        R = RelationMatrix.identity(self.matrix.d)
        out = [R]
        for trace in self.rounds:
            if trace.discoveries:
                R = R.with_discoveries(trace.pairs, trace.round_index)
                out.append(R)
        return out


def apply_moves(row: Iterable[int], moves: Sequence[tuple[int, int]]) -> frozenset[int]:
    """Apply the moves s_ab simultaneously: drop every a, then insert every b.

    With simultaneous application the order of ``moves`` cannot matter.
    """
    row = frozenset(row)
    sources = [a for a, _ in moves]
    if len(set(sources)) != len(sources):
        raise MovePreconditionError(f"moved symbols must be distinct, got {sources}")
    for a, b in moves:
        if a == b:
            raise MovePreconditionError(f"move s_{{{a}{b}}} does not move anything")
        if a not in row:
            raise MovePreconditionError(f"move s_{{{a}{b}}} needs {a} in the row {sorted(row)}")
    return (row - set(sources)) | {b for _, b in moves}


def _witness(A: TransitionMatrix, known: list[int], i: int, j: int) -> Optional[tuple[tuple[int, int], ...]]:
    target = A.masks[j - 1]
    pairs = []
    for a in sorted(A.rows[i - 1]):
        hits = known[a - 1] & target
        if not hits:
            return None
        pairs.append((a, (hits & -hits).bit_length()))
    return tuple(pairs)


def round_step(
    A: TransitionMatrix, R: RelationMatrix, round_index: Optional[int] = None
) -> tuple[RelationMatrix, RoundTrace]:
    """Run one round against the relations known in ``R``.

    ``round_index`` defaults to one past the largest off-diagonal entry,
    which is the right value for any table produced by :func:`run_algorithm`.
    """
    A.require_nonempty_rows()
    if R.d != A.d:
        raise ValueError(f"relation matrix is {R.d}x{R.d}, transition matrix is {A.d}x{A.d}")
    if round_index is None:
        round_index = R.off_diagonal_max() + 1
    known = R.known_masks()
    found = []
    for i in A.symbols:
        for j in A.symbols:
            if R[i, j]:
                continue
            w = _witness(A, known, i, j)
            if w is not None:
                found.append(Discovery(i, j, w))
    trace = RoundTrace(round_index, tuple(found))
    return R.with_discoveries(trace.pairs, round_index), trace


def run_algorithm(A: TransitionMatrix) -> AlgorithmResult:
    A.require_nonempty_rows()
    R = RelationMatrix.identity(A.d)
    rounds = []
    n = 0
    while True:
        n += 1
        R, trace = round_step(A, R, n)
        rounds.append(trace)
        if not trace.discoveries:
            break
    positive = R.all_positive()
    return AlgorithmResult(
        matrix=A,
        relations=R,
        rounds=tuple(rounds),
        stalled_at=n,
        all_positive=positive,
        max_height=max(max(row) for row in R.entries) if positive else None,
    )


class Status(str, enum.Enum):
    FAIR = "FAIR"
    NOT_FAIR = "NOT_FAIR"
    INCONCLUSIVE = "INCONCLUSIVE"


# Provenance labels carried by verdicts and reports.
COMPLETENESS = "completeness-theorem"
SOUNDNESS = "soundness"
POSITIVE_ROW = "positive-row"
COMMON_PREDECESSOR = "common-predecessor"
ORACLE_DIRECT = "oracle-direct"

PROVENANCES = (COMPLETENESS, SOUNDNESS, POSITIVE_ROW, COMMON_PREDECESSOR, ORACLE_DIRECT)


@dataclass(frozen=True)
class Verdict:
    """Fairness verdict for (A, k).

    FAIR means A is in P(k, n) for every n >= n_min.  With k >= s_A the
    algorithm finds every relation, so n_min is the least such n; otherwise
    it is an upper bound.  NOT_FAIR means A is in no P(k, n).
    """

    status: Status
    k: int
    s_A: int
    n_min: Optional[int] = None
    provenance: str = field(default=SOUNDNESS)

    @property
    def exit_code(self) -> int:
        return {Status.FAIR: 0, Status.NOT_FAIR: 1, Status.INCONCLUSIVE: 2}[self.status]


def classify_fairness(A: TransitionMatrix, k: int, result: Optional[AlgorithmResult] = None) -> Verdict:
    if k < 1:
        raise ValueError("k must be at least 1")
    if result is None:
        result = run_algorithm(A)
    s_A = max_row_sum(A)
    complete = k >= s_A
    if result.all_positive:
        return Verdict(Status.FAIR, k, s_A, result.max_height, COMPLETENESS if complete else SOUNDNESS)
    if complete:
        return Verdict(Status.NOT_FAIR, k, s_A, None, COMPLETENESS)
    return Verdict(Status.INCONCLUSIVE, k, s_A, None, SOUNDNESS)


def render_discovery(A: TransitionMatrix, disc: Discovery) -> str:
    i, j = disc.i, disc.j
    target = f"A_{j}=[{A.row_text(j)}]"
    if not disc.moves:
        return f"A_{i}=[{A.row_text(i)}] ≤ {target} ⇒ {i} ⇒ {j}"
    moved = apply_moves(A.rows[i - 1], disc.moves)
    word = "".join(f"s_{{{a}{b}}}" for a, b in disc.moves)
    return (
        f"{word}(A_{i})={word}([{A.row_text(i)}])=[{render_subset(moved, A.d)}]"
        f"=A_{i}^* ≤ {target} ⇒ {i} ⇒ {j}"
    )


def render_trace(result: AlgorithmResult) -> str:
    """Human-readable round-by-round account in bracket notation."""
    A = result.matrix
    R = RelationMatrix.identity(A.d)
    lines = [f"Round 0: R_0={R}"]
    last = 0
    for trace in result.rounds:
        n = trace.round_index
        if not trace.discoveries:
            lines.append(f"Round {n}: no new relations; stop")
            break
        lines.append(f"Round {n}:")
        for disc in trace.discoveries:
            lines.append("  " + render_discovery(A, disc))
        R = R.with_discoveries(trace.pairs, n)
        last = n
        lines.append(f"  R_{n}={R}")
    lines.append(f"Final: R_{last}={result.relations}")
    return "\n".join(lines)
