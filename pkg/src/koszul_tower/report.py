"""Pass/fail records shared by all checks."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

PASS = "PASS"
FAIL = "FAIL"
SKIPPED = "SKIPPED"


@dataclass
class CheckReport:
    name: str
    status: str = PASS
    witness: Any = None
    payload: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def fail(self, witness: Any) -> "CheckReport":
        # keep the first witness only
        if self.status != FAIL:
            self.status = FAIL
            self.witness = witness
        return self

    def __bool__(self) -> bool:
        return self.passed
