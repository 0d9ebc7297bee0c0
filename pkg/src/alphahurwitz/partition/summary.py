from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum


class Verdict(str, Enum):
    PASS = "PASS"
    FAIL = "FAIL"
    INCONCLUSIVE = "INCONCLUSIVE"


@dataclass
class VerificationSummary:
    name: str
    verdict: Verdict
    checked: int = 0
    failures: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.verdict is Verdict.PASS

    def to_json(self, max_failures: int = 20) -> dict:
        return {
            "name": self.name,
            "verdict": self.verdict.value,
            "checked": self.checked,
            "failure_count": len(self.failures),
            "failures": self.failures[:max_failures],
            "details": self.details,
        }

    def line(self) -> str:
        return f"{self.name}: {self.verdict.value} (checked {self.checked}, failures {len(self.failures)})"
