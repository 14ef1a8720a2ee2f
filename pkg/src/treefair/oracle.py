"""Exact follower-set oracle, independent of the relation engine.

For a row-n configuration xi, Poss(xi) is the set of root symbols from which
xi is reachable.  Subtrees of distinct children are independent, so Poss is
computed bottom-up: a leaf labelled c gives {c}, and a node whose children
have Poss sets P_1..P_k gets {s : S(s) meets every P_g}.  Then xi is in
F_n(b) iff b is in Poss(xi).

The family Q_n of all Poss values over D^{L_n} satisfies the same recursion
level by level and has at most 2**d members, so it stays small in n.  Two
slower routes (explicit labelling enumeration and level-matrix products)
exist to certify it at small sizes.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, replace
from functools import lru_cache
from itertools import product
from typing import Iterator, Optional, Sequence

import numpy as np
import scipy.sparse as sp

from .errors import CapacityError
from .matrix import TransitionMatrix, symbols_of


@dataclass(frozen=True)
class Caps:
    max_d: int = 8
    max_k: int = 4
    max_depth: int = 12
    leaf_guard: int = 10**6

    _KEYS = {"d": "max_d", "k": "max_k", "n": "max_depth", "leaves": "leaf_guard"}

    def with_overrides(self, text: Optional[str]) -> "Caps":
        """Apply ``"d=8,k=4,n=12,leaves=1000000"``-style overrides."""
        if not text:
            return self
        changes = {}
        for item in text.split(","):
            item = item.strip()
            if not item:
                continue
            key, _, value = item.partition("=")
            key = key.strip()
            if key not in self._KEYS:
                raise ValueError(f"unknown cap {key!r}; expected one of {sorted(self._KEYS)}")
            changes[self._KEYS[key]] = int(value)
        return replace(self, **changes)

    @classmethod
    def from_env(cls) -> "Caps":
        return cls().with_overrides(os.environ.get("TREEFAIR_CAPS"))


DEFAULT_CAPS = Caps()


def _check_family_caps(A: TransitionMatrix, k: int, n: int, caps: Caps) -> None:
    if k < 1:
        raise ValueError("k must be at least 1")
    if n < 0:
        raise ValueError("depth must be nonnegative")
    if A.d > caps.max_d:
        raise CapacityError("d", caps.max_d, A.d)
    if k > caps.max_k:
        raise CapacityError("k", caps.max_k, k)
    if n > caps.max_depth:
        raise CapacityError("n", caps.max_depth, n)


def _check_leaves(A: TransitionMatrix, k: int, n: int, caps: Caps) -> None:
    leaves = A.d ** (k**n)
    if leaves > caps.leaf_guard:
        raise CapacityError("leaves", caps.leaf_guard, leaves)


def _predecessor_masks(masks: Sequence[int]) -> list[int]:
    """pred[P] = mask of s with S(s) meeting P, for every P in 0 .. 2**d - 1."""
    d = len(masks)
    pred = [0] * (1 << d)
    for P in range(1 << d):
        m = 0
        for s, row in enumerate(masks):
            if row & P:
                m |= 1 << s
        pred[P] = m
    return pred


@lru_cache(maxsize=256)
def _cached_predecessors(masks: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(_predecessor_masks(masks))


def parse_configuration(text: str) -> tuple[int, ...]:
    """``"1213"`` or ``"1,2,10"`` -> tuple of 1-based symbols."""
    text = text.strip()
    if "," in text:
        return tuple(int(c) for c in text.split(","))
    return tuple(int(c) for c in text)


def render_configuration(xi: Sequence[int], d: int) -> str:
    if d <= 9:
        return "".join(str(c) for c in xi)
    return ",".join(str(c) for c in xi)


def poss_root(A: TransitionMatrix, k: int, n: int, xi: Sequence[int] | str) -> frozenset[int]:
    """Root symbols b such that xi (row n, lexicographic site order) is in F_n(b)."""
    if isinstance(xi, str):
        xi = parse_configuration(xi)
    if len(xi) != k**n:
        raise ValueError(f"configuration has length {len(xi)}, expected k**n = {k**n}")
    if any(not 1 <= c <= A.d for c in xi):
        raise ValueError(f"configuration symbols must lie in 1..{A.d}")
    return symbols_of(_poss_root_mask(A.masks, k, n, xi))


def _poss_root_mask(masks: Sequence[int], k: int, n: int, xi: Sequence[int]) -> int:
    pred = _cached_predecessors(tuple(masks))
    level = [1 << (c - 1) for c in xi]
    for _ in range(n):
        nxt = []
        for start in range(0, len(level), k):
            m = -1
            for P in level[start:start + k]:
                m &= pred[P]
            nxt.append(m)
        level = nxt
    return level[0]


@dataclass(frozen=True)
class PossFamily:
    """Q_n: every Poss set realised by some configuration on row n."""

    n: int
    d: int
    masks: frozenset[int]

    @property
    def sets(self) -> frozenset[frozenset[int]]:
        return frozenset(symbols_of(m) for m in self.masks)

    def is_fair(self) -> bool:
        full = (1 << self.d) - 1
        return all(m in (0, full) for m in self.masks)

    def is_complete(self) -> bool:
        return self.masks == frozenset({(1 << self.d) - 1})

    def relation_pairs(self) -> frozenset[tuple[int, int]]:
        """Pairs (i, j) with F_n(i) contained in F_n(j)."""
        out = []
        for i in range(self.d):
            for j in range(self.d):
                bi, bj = 1 << i, 1 << j
                if not any(m & bi and not m & bj for m in self.masks):
                    out.append((i + 1, j + 1))
        return frozenset(out)


@lru_cache(maxsize=4096)
def _families(masks: tuple[int, ...], k: int, n: int) -> tuple[frozenset[int], ...]:
    d = len(masks)
    pred = _predecessor_masks(masks)
    full = (1 << d) - 1
    levels = [frozenset(1 << c for c in range(d))]
    for _ in range(n):
        preds = {pred[P] for P in levels[-1]}
        # Intersecting one predecessor set per child covers all k-multisets of Q_m.
        acc = {full}
        for _ in range(k):
            acc = {t & p for t in acc for p in preds}
        levels.append(frozenset(acc))
    return tuple(levels)


def poss_families(
    A: TransitionMatrix, k: int, n_max: int, caps: Caps = DEFAULT_CAPS
) -> list[PossFamily]:
    """[Q_0, Q_1, ..., Q_{n_max}]."""
    _check_family_caps(A, k, n_max, caps)
    return [PossFamily(m, A.d, q) for m, q in enumerate(_families(A.masks, k, n_max))]


def poss_family(A: TransitionMatrix, k: int, n: int, caps: Caps = DEFAULT_CAPS) -> PossFamily:
    return poss_families(A, k, n, caps)[-1]


@dataclass(frozen=True)
class OracleRelationSet:
    n: int
    pairs: frozenset[tuple[int, int]]
    degrees: Optional[dict] = None

    def __contains__(self, pair) -> bool:
        return tuple(pair) in self.pairs


def oracle_relations_at(A: TransitionMatrix, k: int, n: int, caps: Caps = DEFAULT_CAPS) -> OracleRelationSet:
    return OracleRelationSet(n, poss_family(A, k, n, caps).relation_pairs())


def oracle_degrees(
    A: TransitionMatrix, k: int, n_max: int, caps: Caps = DEFAULT_CAPS
) -> dict[tuple[int, int], int]:
    """Degree (least n <= n_max with i =>_n j) of every pair that has one."""
    degrees: dict[tuple[int, int], int] = {}
    for fam in poss_families(A, k, n_max, caps):
        for pair in fam.relation_pairs():
            degrees.setdefault(pair, fam.n)
    return degrees


def oracle_relation_table(
    A: TransitionMatrix, k: int, n: int, n_max: Optional[int] = None, caps: Caps = DEFAULT_CAPS
) -> OracleRelationSet:
    """Relations at depth n together with degrees up to ``n_max`` (default n)."""
    rel = oracle_relations_at(A, k, n, caps)
    return replace(rel, degrees=oracle_degrees(A, k, n if n_max is None else n_max, caps))


def relation_degree(
    A: TransitionMatrix, k: int, i: int, j: int, n_max: int, caps: Caps = DEFAULT_CAPS
) -> Optional[int]:
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    for fam in poss_families(A, k, n_max, caps):
        if (i, j) in fam.relation_pairs():
            return fam.n
    return None


def oracle_membership(A: TransitionMatrix, k: int, n: int, caps: Caps = DEFAULT_CAPS) -> tuple[bool, bool]:
    """(A in P(k, n), A in P*(k, n))."""
    A.require_nonempty_rows()
    if n < 1:
        raise ValueError("fairness is only defined here for n >= 1")
    fam = poss_family(A, k, n, caps)
    return fam.is_fair(), fam.is_complete()


def _configurations(d: int, length: int) -> Iterator[tuple[int, ...]]:
    return product(range(1, d + 1), repeat=length)


def enumerate_labelings_naive(
    A: TransitionMatrix, k: int, n: int, root: int, caps: Caps = DEFAULT_CAPS
) -> set[str]:
    """F_n(root) by depth-first generation of every valid labelling of the tree.

    Labellings are built level by level; the row is the concatenation of the
    children tuples in lexicographic site order.  Slow on purpose.
    """
    _check_leaves(A, k, n, caps)

    def rows_below(label: int, depth: int) -> set[tuple[int, ...]]:
        if depth == 0:
            return {(label,)}
        below = {c: rows_below(c, depth - 1) for c in sorted(A.successors(label))}
        out = set()
        for kids in product(sorted(A.successors(label)), repeat=k):
            for parts in product(*(below[c] for c in kids)):
                out.add(sum(parts, ()))
        return out

    return {render_configuration(xi, A.d) for xi in rows_below(root, n)}


def level_transition(A: TransitionMatrix, k: int, m: int) -> sp.csr_matrix:
    """0/1 matrix from row-m configurations to row-(m+1) configurations.

    Each site on row m independently picks a k-tuple of followers, so this
    is the Kronecker power of the d x d**k one-level matrix.
    """
    base = np.zeros((A.d, A.d**k), dtype=np.int8)
    for col, kids in enumerate(_configurations(A.d, k)):
        for s in A.symbols:
            if all(c in A.successors(s) for c in kids):
                base[s - 1, col] = 1
    out = sp.csr_matrix(base)
    one = out
    for _ in range(k**m - 1):
        out = sp.kron(out, one, format="csr")
    return out


def level_matrix_supports(A: TransitionMatrix, k: int, n: int, caps: Caps = DEFAULT_CAPS) -> np.ndarray:
    """d x d**(k**n) bool table; entry (i, xi) says xi is in F_n(i).

    Columns follow lexicographic order of configurations.  Computed as the
    boolean product of the level transition matrices.
    """
    _check_leaves(A, k, n, caps)
    acc = sp.identity(A.d, dtype=np.int64, format="csr")
    for m in range(n):
        acc = acc @ level_transition(A, k, m).astype(np.int64)
        acc.data = np.ones_like(acc.data)
        acc.eliminate_zeros()
    return np.asarray(acc.toarray() > 0)


def all_configurations(d: int, k: int, n: int) -> list[tuple[int, ...]]:
    """Configurations on row n in the column order of :func:`level_matrix_supports`."""
    return list(_configurations(d, k**n))


def brute_force_family(A: TransitionMatrix, k: int, n: int, caps: Caps = DEFAULT_CAPS) -> frozenset[int]:
    """Q_n as masks, by running poss_root over every configuration."""
    _check_leaves(A, k, n, caps)
    return frozenset(
        _poss_root_mask(A.masks, k, n, xi) for xi in _configurations(A.d, k**n)
    )


def membership_from_supports(table: np.ndarray) -> tuple[bool, bool]:
    """(fair, complete) read off a level-matrix support table."""
    fair = bool((table == table[0]).all())
    return fair, bool(table.all())

