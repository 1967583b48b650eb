"""Check records and stable JSON reports."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, List, Optional

STATUSES = ("pass", "fail", "skipped")


@dataclass
class Check:
    suite: str
    name: str
    status: str
    details: Any = None
    degree_used: Optional[int] = None

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"bad status {self.status!r}")

    def to_dict(self) -> dict:
        return {"suite": self.suite, "name": self.name, "status": self.status,
                "details": self.details, "degree_used": self.degree_used}


@dataclass
class Report:
    checks: List[Check] = field(default_factory=list)
    data: dict = field(default_factory=dict)

    def add(self, suite: str, name: str, ok, details=None, degree_used=None) -> Check:
        status = ok if isinstance(ok, str) else ("pass" if ok else "fail")
        c = Check(suite, name, status, details, degree_used)
        self.checks.append(c)
        return c

    def extend(self, other: "Report"):
        self.checks.extend(other.checks)
        for k, v in other.data.items():
            self.data.setdefault(k, v)
        return self

    @property
    def passed(self) -> bool:
        return all(c.status != "fail" for c in self.checks)

    @property
    def status(self) -> str:
        return "pass" if self.passed else "fail"

    def failures(self) -> List[Check]:
        return [c for c in self.checks if c.status == "fail"]

    def to_dict(self) -> dict:
        return {"status": self.status, "checks": [c.to_dict() for c in self.checks],
                "data": self.data}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"
