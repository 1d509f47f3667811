"""Pass/fail reports shared by the verification suites and the CLI."""

from __future__ import annotations

import time
from dataclasses import dataclass, field


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class Report:
    title: str
    checks: list[Check] = field(default_factory=list)
    seconds: float = 0.0

    def add(self, name: str, passed: bool, detail: str = "") -> bool:
        self.checks.append(Check(name, bool(passed), detail))
        return bool(passed)

    def merge(self, other: Report) -> None:
        for c in other.checks:
            self.checks.append(Check(f"{other.title}/{c.name}", c.passed, c.detail))

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def to_text(self) -> str:
        lines = [f"== {self.title} =="]
        for c in self.checks:
            mark = "PASS" if c.passed else "FAIL"
            lines.append(f"{mark}  {c.name}" + (f"  ({c.detail})" if c.detail else ""))
        passed = sum(c.passed for c in self.checks)
        lines.append(f"{passed}/{len(self.checks)} passed in {self.seconds:.1f}s")
        return "\n".join(lines)

    def to_json(self) -> dict:
        return {
            "title": self.title,
            "ok": self.ok,
            "seconds": round(self.seconds, 3),
            "checks": [
                {"name": c.name, "passed": c.passed, "detail": c.detail} for c in self.checks
            ],
        }


class timed:
    """Context manager that records elapsed wall time on a report."""

    def __init__(self, report: Report):
        self.report = report

    def __enter__(self):
        self._t = time.perf_counter()
        return self.report

    def __exit__(self, *exc):
        self.report.seconds += time.perf_counter() - self._t
        return False
