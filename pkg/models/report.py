# models/report.py
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""

    def to_dict(self):
        return {
            'name': self.name,
            'pass': self.passed,
            'detail': self.detail,
        }

    def to_line(self):
        return f"  [{'PASS' if self.passed else 'FAIL'}] {self.name}" + (f" - {self.detail}" if self.detail else "")


@dataclass
class VerificationReport:
    title: str = ""
    checks: List[Check] = field(default_factory=list)

    def check(self, name: str, condition: bool, detail: str = "") -> bool:
        self.checks.append(Check(name, bool(condition), detail))
        return bool(condition)

    def extend(self, other: "VerificationReport") -> "VerificationReport":
        self.checks.extend(other.checks)
        return self

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def first_failure(self) -> Optional[Check]:
        return next((c for c in self.checks if not c.passed), None)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'pass': self.passed,
            'checks': [c.to_dict() for c in self.checks],
        }

    def to_text(self) -> str:
        lines = [self.title] if self.title else []
        lines.extend(c.to_line() for c in self.checks)
        total = len(self.checks)
        failed = sum(1 for c in self.checks if not c.passed)
        lines.append(f"{total - failed}/{total} checks passed")
        return "\n".join(lines)
