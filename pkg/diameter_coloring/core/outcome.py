"""
Search outcomes and counters shared by every solver.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Tuple

Coloring = Tuple[int, ...]

RULES = (
    "R1",
    "R2",
    "R3",
    "B1",
    "B2",
    "B3",
    "B4",
    "BRANCH",
    "DEGREE",
    "BALL",
    "DOMSET",
    "SPLIT",
)


class Verdict(str, Enum):
    SAT = "SAT"
    UNSAT = "UNSAT"
    TIMEOUT = "TIMEOUT"


def _empty_firings() -> Dict[str, int]:
    return dict.fromkeys(RULES, 0)


@dataclass
class SearchStats:
    """
    Counters collected during one search.

    All counters only grow during a run. ``merge`` is used to combine the
    statistics of subtrees explored by separate workers.
    """

    nodes_expanded: int = 0
    rule_firings: Dict[str, int] = field(default_factory=_empty_firings)
    witness_tuples_checked: int = 0
    max_depth: int = 0
    wall_time: float = 0.0
    fallbacks: int = 0
    progress_violations: int = 0
    domination_misses: int = 0
    rule_trace: List[str] = field(default_factory=list)

    def fire(self, rule: str, count: int = 1) -> None:
        self.rule_firings[rule] = self.rule_firings.get(rule, 0) + count

    def firings(self, rule: str) -> int:
        return self.rule_firings.get(rule, 0)

    def merge(self, other: "SearchStats") -> None:
        self.nodes_expanded += other.nodes_expanded
        for rule, count in other.rule_firings.items():
            self.fire(rule, count)
        self.witness_tuples_checked += other.witness_tuples_checked
        self.max_depth = max(self.max_depth, other.max_depth)
        self.fallbacks += other.fallbacks
        self.progress_violations += other.progress_violations
        self.domination_misses += other.domination_misses
        self.rule_trace.extend(other.rule_trace)

    def counters(self) -> Dict[str, int]:
        """Every counter except wall time, in a stable key order."""
        values = {
            "nodes_expanded": self.nodes_expanded,
            "witness_tuples_checked": self.witness_tuples_checked,
            "max_depth": self.max_depth,
            "fallbacks": self.fallbacks,
            "progress_violations": self.progress_violations,
            "domination_misses": self.domination_misses,
        }
        for rule in RULES:
            values[f"rule_{rule}"] = self.firings(rule)
        return values

    def as_dict(self) -> Dict[str, float]:
        values: Dict[str, float] = dict(self.counters())
        values["wall_time"] = round(self.wall_time, 6)
        return values


@dataclass(frozen=True)
class SearchOutcome:
    """
    Result of a solver run.

    Attributes:
        verdict: SAT, UNSAT or TIMEOUT
        coloring: The certificate when SAT; colors (or target vertices) per vertex
        stats: Counters collected during the run
    """

    verdict: Verdict
    coloring: Optional[Coloring]
    stats: SearchStats

    @property
    def is_sat(self) -> bool:
        return self.verdict == Verdict.SAT
