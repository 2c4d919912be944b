"""Structured verdicts shared by every check."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"CHECK {self.name} {status}" + (f" {self.detail}" if self.detail else "")


@dataclass
class Report:
    """A list of named checks plus free-form computed data (ranks, residuals, bases)."""

    title: str
    checks: list[Check] = field(default_factory=list)
    data: dict[str, Any] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def __bool__(self):
        return self.passed

    def add(self, name: str, passed: bool, detail: str = "") -> Check:
        c = Check(name, bool(passed), detail)
        self.checks.append(c)
        return c

    def extend(self, other: "Report", prefix: str = "") -> None:
        for c in other.checks:
            self.checks.append(Check(prefix + c.name, c.passed, c.detail))
        self.notes.extend(other.notes)

    def check(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def machine_lines(self) -> list[str]:
        return [c.line() for c in self.checks]

    def text(self) -> str:
        out = [self.title]
        for c in self.checks:
            mark = "ok  " if c.passed else "FAIL"
            out.append(f"  [{mark}] {c.name}" + (f": {c.detail}" if c.detail else ""))
        out.extend(f"  note: {n}" for n in self.notes)
        return "\n".join(out)
