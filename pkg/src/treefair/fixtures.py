"""Built-in regression fixtures with known answers, run by ``treefair examples``."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .matrix import parse_matrix, power_support
from .oracle import level_matrix_supports, oracle_membership, oracle_relations_at
from .relations import classify_fairness, run_algorithm


@dataclass(frozen=True)
class FixtureOutcome:
    name: str
    expected: str
    actual: str

    @property
    def ok(self) -> bool:
        return self.expected == self.actual


def _final_R(text: str) -> str:
    return run_algorithm(parse_matrix(text)).relations.render()


def _verdict(text: str, k: int) -> str:
    v = classify_fairness(parse_matrix(text), k)
    return v.status.value if v.n_min is None else f"{v.status.value} n_min={v.n_min}"


def _off_diagonal_discoveries(text: str) -> str:
    R = run_algorithm(parse_matrix(text)).relations
    return str(sorted(p for p in R.pairs() if p[0] != p[1]))


def _oracle_pair_count(text: str, k: int, n: int) -> str:
    return str(len(oracle_relations_at(parse_matrix(text), k, n).pairs))


def _membership(text: str, k: int, n: int) -> str:
    return str(oracle_membership(parse_matrix(text), k, n))


def _power_full(text: str, n: int) -> str:
    return str(bool(power_support(parse_matrix(text), n).all()))


def _level_rows(text: str, k: int, n: int) -> str:
    table = level_matrix_supports(parse_matrix(text), k, n).astype(np.int8)
    return "|".join("".join(str(v) for v in row) for row in table)


FIXTURES: list[tuple[str, str, Callable[[], str]]] = [
    ("3x3 fair: final R", "[143|212|141]", lambda: _final_R("110|001|100")),
    ("3x3 fair: verdict k=2", "FAIR n_min=4", lambda: _verdict("110|001|100", 2)),
    ("4x4 fair: final R", "[1456|1156|2216|3331]", lambda: _final_R("1001|1000|0100|0010")),
    ("4x4 fair: verdict k=2", "FAIR n_min=6", lambda: _verdict("1001|1000|0100|0010", 2)),
    ("4x4 stalls: final R", "[1000|0100|1010|1201]", lambda: _final_R("0111|1000|0100|0010")),
    ("4x4 stalls: verdict k=3", "NOT_FAIR", lambda: _verdict("0111|1000|0100|0010", 3)),
    ("4x4 stalls: A^7 positive", "True", lambda: _power_full("0111|1000|0100|0010", 7)),
    ("small k: no discoveries", "[]", lambda: _off_diagonal_discoveries("0111|1011|1101|1110")),
    ("small k: oracle relations n=1", "4", lambda: _oracle_pair_count("0111|1011|1101|1110", 2, 1)),
    ("small k: oracle relations n=2", "16", lambda: _oracle_pair_count("0111|1011|1101|1110", 2, 2)),
    ("small k: P*(2,2)", "(True, True)", lambda: _membership("0111|1011|1101|1110", 2, 2)),
    ("small k: verdict k=2", "INCONCLUSIVE", lambda: _verdict("0111|1011|1101|1110", 2)),
    ("three-cycle: verdict k=2", "NOT_FAIR", lambda: _verdict("011|100|010", 2)),
    ("three-cycle: final R", "[100|010|101]", lambda: _final_R("011|100|010")),
    ("level matrix [11|10], k=2, n=1", "1111|1000", lambda: _level_rows("11|10", 2, 1)),
]


def run_fixtures() -> list[FixtureOutcome]:
    return [FixtureOutcome(name, expected, compute()) for name, expected, compute in FIXTURES]
