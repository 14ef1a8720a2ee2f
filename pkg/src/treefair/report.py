"""Analysis reports: assembly, text rendering and a byte-stable JSON form."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

from .matrix import (
    TransitionMatrix,
    all_ktuples_have_common_predecessor,
    has_positive_row,
    max_row_sum,
    primitivity_exponent,
)
from .oracle import DEFAULT_CAPS, Caps, oracle_degrees, poss_families
from .relations import (
    COMMON_PREDECESSOR,
    COMPLETENESS,
    ORACLE_DIRECT,
    POSITIVE_ROW,
    AlgorithmResult,
    Status,
    Verdict,
    classify_fairness,
    render_trace,
    run_algorithm,
)

DIAGONAL_NOTE = "diagonal entries are stored as 1; the relation i => i has height 0"


@dataclass(frozen=True)
class OracleLevel:
    n: int
    in_P: bool
    in_P_star: bool
    relations: tuple[str, ...]


@dataclass(frozen=True)
class OracleSection:
    depth: int
    levels: tuple[OracleLevel, ...]
    degrees: dict[str, int]
    provenance: str = ORACLE_DIRECT


@dataclass(frozen=True)
class AnalysisReport:
    matrix: str
    k: int
    s_A: int
    exponent: Optional[int]
    relations: str
    heights: dict[str, int]
    stalled_at: int
    verdict: str
    n_min: Optional[int]
    provenance: str
    complete: Optional[bool]
    complete_provenance: Optional[str]
    note: str = DIAGONAL_NOTE
    oracle: Optional[OracleSection] = None
    trace: Optional[str] = field(default=None, compare=False)

    @property
    def exit_code(self) -> int:
        return {"FAIR": 0, "NOT_FAIR": 1, "INCONCLUSIVE": 2}[self.verdict]

    def to_dict(self) -> dict:
        out = {
            "matrix": self.matrix,
            "k": self.k,
            "s_A": self.s_A,
            "exponent": self.exponent,
            "relations": self.relations,
            "heights": dict(self.heights),
            "stalled_at": self.stalled_at,
            "verdict": self.verdict,
            "n_min": self.n_min,
            "provenance": self.provenance,
            "complete": self.complete,
            "complete_provenance": self.complete_provenance,
            "note": self.note,
            "oracle": None,
        }
        if self.oracle is not None:
            out["oracle"] = {
                "depth": self.oracle.depth,
                "provenance": self.oracle.provenance,
                "levels": [
                    {"n": lv.n, "in_P": lv.in_P, "in_P_star": lv.in_P_star, "relations": list(lv.relations)}
                    for lv in self.oracle.levels
                ],
                "degrees": dict(self.oracle.degrees),
            }
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "AnalysisReport":
        oracle = data.get("oracle")
        section = None
        if oracle is not None:
            section = OracleSection(
                depth=oracle["depth"],
                levels=tuple(
                    OracleLevel(lv["n"], lv["in_P"], lv["in_P_star"], tuple(lv["relations"]))
                    for lv in oracle["levels"]
                ),
                degrees=dict(oracle["degrees"]),
                provenance=oracle["provenance"],
            )
        return cls(
            matrix=data["matrix"],
            k=data["k"],
            s_A=data["s_A"],
            exponent=data["exponent"],
            relations=data["relations"],
            heights=dict(data["heights"]),
            stalled_at=data["stalled_at"],
            verdict=data["verdict"],
            n_min=data["n_min"],
            provenance=data["provenance"],
            complete=data["complete"],
            complete_provenance=data["complete_provenance"],
            note=data["note"],
            oracle=section,
        )

    def render_machine(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False) + "\n"

    @classmethod
    def parse_machine(cls, text: str) -> "AnalysisReport":
        return cls.from_dict(json.loads(text))

    def render_text(self) -> str:
        lines = [
            f"matrix      [{self.matrix}]",
            f"k           {self.k}",
            f"s_A         {self.s_A}",
            f"exponent    {self.exponent if self.exponent is not None else 'not primitive'}",
            f"relations   {self.relations}   ({self.note})",
            f"stalled at  round {self.stalled_at}",
        ]
        if self.verdict == "FAIR":
            bound = "least" if self.provenance == COMPLETENESS else "upper bound for the least"
            lines.append(f"verdict     FAIR for n >= {self.n_min} ({bound} such n) [{self.provenance}]")
        else:
            lines.append(f"verdict     {self.verdict} [{self.provenance}]")
        if self.complete is not None:
            lines.append(f"complete    {'yes' if self.complete else 'no'} [{self.complete_provenance}]")
        if self.oracle is not None:
            lines.append(f"oracle      depth <= {self.oracle.depth} [{self.oracle.provenance}]")
            for lv in self.oracle.levels:
                lines.append(
                    f"  n={lv.n}: P={'yes' if lv.in_P else 'no'} P*={'yes' if lv.in_P_star else 'no'} "
                    f"relations={len(lv.relations)}"
                )
            if self.oracle.degrees:
                degs = " ".join(f"{p}:{d}" for p, d in self.oracle.degrees.items())
                lines.append(f"  degrees {degs}")
        if self.trace:
            lines.append("")
            lines.append(self.trace)
        return "\n".join(lines) + "\n"


def _pair_key(i: int, j: int) -> str:
    return f"{i}=>{j}"


def _completeness(A: TransitionMatrix, k: int, verdict: Verdict, exponent: Optional[int]):
    """Whether A is eventually in P*(k), when the algorithm's verdict settles it."""
    if verdict.status is Status.FAIR:
        return all_ktuples_have_common_predecessor(A, k), COMMON_PREDECESSOR
    if verdict.status is Status.NOT_FAIR:
        return False, COMPLETENESS
    if A.d == k + 1 and exponent is not None:
        return has_positive_row(A), POSITIVE_ROW
    return None, None


def analyze(
    A: TransitionMatrix,
    k: int,
    oracle_depth: Optional[int] = None,
    trace: bool = False,
    caps: Caps = DEFAULT_CAPS,
) -> AnalysisReport:
    A.require_nonempty_rows()
    result: AlgorithmResult = run_algorithm(A)
    verdict = classify_fairness(A, k, result)
    exponent = primitivity_exponent(A)
    complete, complete_prov = _completeness(A, k, verdict, exponent)
    R = result.relations
    heights = {
        _pair_key(i, j): R[i, j]
        for i in A.symbols
        for j in A.symbols
        if i != j and R[i, j]
    }
    section = None
    if oracle_depth is not None:
        fams = poss_families(A, k, oracle_depth, caps)
        levels = tuple(
            OracleLevel(
                f.n,
                f.is_fair(),
                f.is_complete(),
                tuple(_pair_key(i, j) for i, j in sorted(f.relation_pairs())),
            )
            for f in fams[1:]
        )
        degrees = {
            _pair_key(i, j): deg
            for (i, j), deg in sorted(oracle_degrees(A, k, oracle_depth, caps).items())
            if i != j
        }
        section = OracleSection(oracle_depth, levels, degrees)
    return AnalysisReport(
        matrix=A.render(),
        k=k,
        s_A=max_row_sum(A),
        exponent=exponent,
        relations=R.render(),
        heights=heights,
        stalled_at=result.stalled_at,
        verdict=verdict.status.value,
        n_min=verdict.n_min,
        provenance=verdict.provenance,
        complete=complete,
        complete_provenance=complete_prov,
        oracle=section,
        trace=render_trace(result) if trace else None,
    )
