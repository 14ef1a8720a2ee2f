"""0/1 transition matrices and their elementary boolean analysis.

Symbols are 1-based everywhere in the public API.  Internally a successor
set is also available as an int bitmask with bit ``s - 1`` standing for
symbol ``s``; the relation engine and the oracle work on masks.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Iterable, Optional

import numpy as np

from .errors import MatrixParseError, ZeroRowError


def mask_of(symbols: Iterable[int]) -> int:
    m = 0
    for s in symbols:
        m |= 1 << (s - 1)
    return m


def symbols_of(mask: int) -> frozenset[int]:
    out = []
    s = 1
    while mask:
        if mask & 1:
            out.append(s)
        mask >>= 1
        s += 1
    return frozenset(out)


def render_subset(members: Iterable[int], d: int) -> str:
    """Render a subset of {1..d} as a 0/1 indicator string, e.g. {1,3} -> "101"."""
    members = set(members)
    return "".join("1" if s in members else "0" for s in range(1, d + 1))


@dataclass(frozen=True)
class TransitionMatrix:
    """A d x d 0/1 matrix stored as its successor sets.

    ``rows[i - 1]`` is S(i), the set of symbols allowed to follow ``i``.
    Empty rows are accepted here; analysis entry points reject them through
    :meth:`require_nonempty_rows`.
    """

    d: int
    rows: tuple[frozenset[int], ...]

    def __post_init__(self):
        if self.d < 1:
            raise ValueError("alphabet size must be at least 1")
        if len(self.rows) != self.d:
            raise ValueError(f"expected {self.d} rows, got {len(self.rows)}")
        rows = tuple(frozenset(r) for r in self.rows)
        for i, row in enumerate(rows, start=1):
            bad = [s for s in row if not 1 <= s <= self.d]
            if bad:
                raise ValueError(f"row {i} has symbols outside 1..{self.d}: {sorted(bad)}")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[int]]) -> "TransitionMatrix":
        rows = [frozenset(r) for r in rows]
        return cls(len(rows), tuple(rows))

    @classmethod
    def from_bits(cls, bits) -> "TransitionMatrix":
        """Build from a nested 0/1 sequence (or a square numpy array)."""
        bits = np.asarray(bits)
        if bits.ndim != 2 or bits.shape[0] != bits.shape[1]:
            raise ValueError(f"expected a square 2-D array, got shape {bits.shape}")
        return cls.from_rows(
            [j + 1 for j in np.flatnonzero(row)] for row in bits
        )

    @classmethod
    def from_masks(cls, masks: Iterable[int], d: Optional[int] = None) -> "TransitionMatrix":
        masks = list(masks)
        return cls(d or len(masks), tuple(symbols_of(m) for m in masks))

    @cached_property
    def masks(self) -> tuple[int, ...]:
        return tuple(mask_of(r) for r in self.rows)

    @property
    def full_mask(self) -> int:
        return (1 << self.d) - 1

    @property
    def symbols(self) -> range:
        return range(1, self.d + 1)

    def successors(self, i: int) -> frozenset[int]:
        return self.rows[i - 1]

    def to_array(self) -> np.ndarray:
        out = np.zeros((self.d, self.d), dtype=bool)
        for i, row in enumerate(self.rows):
            for j in row:
                out[i, j - 1] = True
        return out

    def row_text(self, i: int) -> str:
        return render_subset(self.rows[i - 1], self.d)

    def render(self) -> str:
        return "|".join(self.row_text(i) for i in self.symbols)

    def __str__(self) -> str:
        return f"[{self.render()}]"

    def zero_rows(self) -> list[int]:
        return [i for i in self.symbols if not self.rows[i - 1]]

    def require_nonempty_rows(self) -> None:
        empty = self.zero_rows()
        if empty:
            raise ZeroRowError(empty)

    @property
    def encoding(self) -> int:
        """Row-major bit pattern read as a binary number (first entry most significant)."""
        return int(self.render().replace("|", ""), 2)


def parse_matrix(text: str) -> TransitionMatrix:
    """Parse ``"110|001|100"`` (or the same rows one per line) into a matrix.

    Whitespace around rows is ignored.  Brackets around the whole matrix, as
    in ``"[110|001|100]"``, are tolerated.
    """
    body = text.strip()
    if body.startswith("[") and body.endswith("]"):
        body = body[1:-1]
    if not body.strip():
        raise MatrixParseError("empty matrix text")
    if "|" in body:
        raw_rows = body.split("|")
    else:
        raw_rows = [line for line in body.splitlines() if line.strip()]
    rows = [r.strip() for r in raw_rows]
    d = len(rows)
    for r, row in enumerate(rows, start=1):
        if not row:
            raise MatrixParseError("empty row", row=r)
    for r, row in enumerate(rows, start=1):
        for c, ch in enumerate(row, start=1):
            if ch not in "01":
                raise MatrixParseError(f"illegal character {ch!r}", row=r, column=c)
        if len(row) != d:
            raise MatrixParseError(
                f"row has length {len(row)} but the matrix has {d} rows", row=r
            )
    return TransitionMatrix.from_rows(
        [c for c, ch in enumerate(row, start=1) if ch == "1"] for row in rows
    )


def max_row_sum(A: TransitionMatrix) -> int:
    return max(len(r) for r in A.rows)


def boolean_product(X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """Matrix product over the (OR, AND) semiring."""
    return (X.astype(np.int64) @ Y.astype(np.int64)) > 0


def power_support(A: TransitionMatrix, n: int) -> np.ndarray:
    """Support of A**n as a d x d bool array; n = 0 gives the identity."""
    if n < 0:
        raise ValueError("power must be nonnegative")
    result = np.eye(A.d, dtype=bool)
    base = A.to_array()
    while n:
        if n & 1:
            result = boolean_product(result, base)
        base = boolean_product(base, base)
        n >>= 1
    return result


def primitivity_exponent(A: TransitionMatrix) -> Optional[int]:
    """Least p >= 1 with A**p > 0, or None if A is not primitive.

    The search stops at the Wielandt bound (d - 1)**2 + 1, which no primitive
    d x d matrix exceeds.
    """
    base = A.to_array()
    current = base.copy()
    for p in range(1, (A.d - 1) ** 2 + 2):
        if current.all():
            return p
        current = boolean_product(current, base)
    return None


def is_irreducible(A: TransitionMatrix) -> bool:
    """Every symbol reaches every symbol along a path of positive length."""
    reach = power_support(A, 1)
    closure = reach.copy()
    for _ in range(A.d):
        closure = closure | boolean_product(closure, reach)
    return bool(closure.all())


def has_positive_row(A: TransitionMatrix) -> bool:
    return any(m == A.full_mask for m in A.masks)


def all_ktuples_have_common_predecessor(A: TransitionMatrix, k: int) -> bool:
    """True iff every (a_1, ..., a_k) in D^k has some i with all a_g in S(i).

    Only the set {a_1, ..., a_k} matters, and a subset of a covered set is
    covered, so it is enough to check the subsets of size min(k, d).
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    size = min(k, A.d)
    masks = A.masks
    for subset in combinations(range(A.d), size):
        t = 0
        for s in subset:
            t |= 1 << s
        if not any(m & t == t for m in masks):
            return False
    return True
