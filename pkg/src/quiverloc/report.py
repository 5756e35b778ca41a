from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class Check:
    """One verified claim: ``passed`` says whether it held, ``certified``
    whether the underlying rewriting was complete enough to trust it."""

    name: str
    verdict: str
    passed: bool
    certified: bool = True
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "check": self.name,
            "verdict": self.verdict,
            "passed": self.passed,
            "certified": self.certified,
            "details": self.details,
        }


def all_passed(checks) -> bool:
    return all(c.passed for c in checks)
