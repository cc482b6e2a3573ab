"""Three-valued verdicts carrying certificates or counterexamples."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any


class Status(enum.Enum):
    HOLDS = "holds"
    FAILS = "fails"
    UNKNOWN = "unknown"

    @property
    def exit_code(self) -> int:
        return {Status.HOLDS: 0, Status.FAILS: 1, Status.UNKNOWN: 2}[self]


@dataclass(frozen=True)
class Verdict:
    status: Status
    certificate: Any = None
    reason: str = ""
    details: dict = field(default_factory=dict, compare=False)

    @classmethod
    def holds(cls, certificate=None, reason="", **details) -> "Verdict":
        return cls(Status.HOLDS, certificate, reason, details)

    @classmethod
    def fails(cls, certificate=None, reason="", **details) -> "Verdict":
        return cls(Status.FAILS, certificate, reason, details)

    @classmethod
    def unknown(cls, certificate=None, reason="", **details) -> "Verdict":
        return cls(Status.UNKNOWN, certificate, reason, details)

    @property
    def is_holds(self) -> bool:
        return self.status is Status.HOLDS

    @property
    def is_fails(self) -> bool:
        return self.status is Status.FAILS

    @property
    def is_unknown(self) -> bool:
        return self.status is Status.UNKNOWN

    @property
    def exit_code(self) -> int:
        return self.status.exit_code


def conjoin(*statuses: Status) -> Status:
    """Conjunction where a single FAILS dominates UNKNOWN."""
    if any(s is Status.FAILS for s in statuses):
        return Status.FAILS
    if all(s is Status.HOLDS for s in statuses):
        return Status.HOLDS
    return Status.UNKNOWN
