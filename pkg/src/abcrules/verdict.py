from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

PASS = "pass"
FAIL = "fail"
NOT_APPLICABLE = "not-applicable"
EXHAUSTED = "exhausted"
REFUTED_WITHIN_BOUNDS = "exhausted-refuted-within-bounds"


@dataclass
class AxiomVerdict:
    """Result of an axiom check or search.

    A ``fail`` always carries a ``witness`` dict (profiles, committees,
    permutation, replication factor, ``k``) from which the failure can be
    replayed.  ``bounds`` and ``instances`` describe what was searched.
    """

    axiom: str
    rule: str
    status: str
    witness: dict[str, Any] | None = None
    reason: str = ""
    bounds: dict[str, Any] = field(default_factory=dict)
    instances: int = 0
    seed: int | None = None

    @property
    def passed(self) -> bool:
        return self.status == PASS

    @property
    def failed(self) -> bool:
        return self.status == FAIL

    def __str__(self):
        text = f"{self.axiom} [{self.rule}]: {self.status}"
        if self.reason:
            text += f" ({self.reason})"
        return text
