"""Verification reports and search budgets shared by all checks."""

from __future__ import annotations

import json
import os
import time
from dataclasses import dataclass, field
from typing import Any, Dict, Optional

HOLDS = "holds"
FAILS = "fails"
EXHAUSTED = "exhausted-no-witness"
TIMEOUT = "timeout"
VERDICTS = (HOLDS, FAILS, EXHAUSTED, TIMEOUT)

DEFAULT_NODE_BUDGET = 2_000_000
BUDGET_ENV = "EPOBS_NODE_BUDGET"


def default_budget() -> int:
    """Node budget from ``EPOBS_NODE_BUDGET`` or the built-in default."""
    raw = os.environ.get(BUDGET_ENV)
    if raw is None or raw == "":
        return DEFAULT_NODE_BUDGET
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"{BUDGET_ENV} must be an integer, got {raw!r}") from None
    if value < 1:
        raise ValueError(f"{BUDGET_ENV} must be positive")
    return value


class SearchTimeout(Exception):
    """Raised inside a search when its node budget runs out."""


class Budget:
    """Counts search nodes and raises :class:`SearchTimeout` past the limit."""

    __slots__ = ("limit", "nodes")

    def __init__(self, limit: Optional[int] = None):
        self.limit = default_budget() if limit is None else limit
        self.nodes = 0

    def tick(self, k: int = 1) -> None:
        self.nodes += k
        if self.nodes > self.limit:
            raise SearchTimeout(self.nodes)


@dataclass
class VerificationReport:
    """Outcome of one check.

    ``certificate`` is a JSON-ready object (linkage, subdivision model,
    decomposition or failing set) or ``None``.  Wall time is kept in
    ``stats`` but left out of :meth:`to_json` unless asked for, so that
    repeated runs serialise identically.
    """

    claim: str
    params: Dict[str, Any]
    verdict: str
    certificate: Optional[Any] = None
    stats: Dict[str, Any] = field(default_factory=dict)
    detail: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.verdict not in VERDICTS:
            raise ValueError(f"unknown verdict {self.verdict!r}")

    def to_json(self, timing: bool = False) -> Dict[str, Any]:
        stats = {k: v for k, v in self.stats.items() if timing or k != "wall_time"}
        out = {
            "claim": self.claim,
            "params": self.params,
            "verdict": self.verdict,
            "stats": stats,
            "detail": self.detail,
            "certificate": self.certificate,
        }
        return out

    def dumps(self, timing: bool = False) -> str:
        return json.dumps(self.to_json(timing), indent=2, sort_keys=True) + "\n"


class Stopwatch:
    def __init__(self) -> None:
        self.start = time.perf_counter()

    def elapsed(self) -> float:
        return round(time.perf_counter() - self.start, 6)
