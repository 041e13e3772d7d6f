"""Verification ledgers shared by the correlator modules."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"[{mark}] {self.name}" + (f": {self.detail}" if self.detail else "")

    def to_dict(self) -> dict[str, Any]:
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


@dataclass
class CorrelatorReport:
    """A constructed object plus the checks run on it."""

    title: str
    curve: str
    sections: dict[str, str] = field(default_factory=dict)
    checks: list[CheckResult] = field(default_factory=list)
    free_parameters: list[str] = field(default_factory=list)
    data: dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str, passed: bool, detail: str = "") -> CheckResult:
        res = CheckResult(name, bool(passed), detail)
        self.checks.append(res)
        return res

    def extend(self, other: "CorrelatorReport", prefix: str = "") -> None:
        for c in other.checks:
            self.checks.append(CheckResult(prefix + c.name, c.passed, c.detail))

    def render(self) -> str:
        out = [f"== {self.title} ==", f"curve: {self.curve}"]
        for key, text in self.sections.items():
            out.append(f"-- {key} --")
            out.append(text)
        if self.free_parameters:
            out.append("free parameters: " + ", ".join(self.free_parameters))
        for c in self.checks:
            out.append(c.line())
        out.append("status: " + ("ok" if self.passed else "FAILED"))
        return "\n".join(out)

    def to_dict(self) -> dict[str, Any]:
        return {
            "title": self.title,
            "curve": self.curve,
            "sections": dict(self.sections),
            "free_parameters": list(self.free_parameters),
            "checks": [c.to_dict() for c in self.checks],
            "data": self.data,
            "passed": self.passed,
        }
