from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class AxiomCheck:
    name: str
    passed: bool
    witness: int | None = None
    detail: str = ""


@dataclass
class ValidationReport:
    """Per-axiom outcome; failures carry one witness basis index."""

    subject: str
    checks: list[AxiomCheck] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def __bool__(self) -> bool:
        return self.ok

    def add(self, name: str, passed: bool, witness: int | None = None, detail: str = "") -> None:
        self.checks.append(AxiomCheck(name, passed, witness, detail))

    def failures(self) -> list[AxiomCheck]:
        return [c for c in self.checks if not c.passed]

    def to_dict(self) -> dict:
        return {
            "subject": self.subject,
            "ok": self.ok,
            "checks": [
                {"axiom": c.name, "passed": c.passed, "witness": c.witness, "detail": c.detail}
                for c in self.checks
            ],
        }

    def __str__(self) -> str:
        lines = [f"{self.subject}: {'ok' if self.ok else 'FAILED'}"]
        for c in self.checks:
            mark = "pass" if c.passed else "FAIL"
            extra = f" (witness basis index {c.witness})" if c.witness is not None else ""
            extra += f" {c.detail}" if c.detail else ""
            lines.append(f"  [{mark}] {c.name}{extra}")
        return "\n".join(lines)


def first_differing_column(a, b) -> int | None:
    """Index of the first column where two equal-shape matrices differ."""
    ea, eb = a.entries(), b.entries()
    c = a.cols
    bad = None
    for k, (x, y) in enumerate(zip(ea, eb)):
        if x != y:
            j = k % c
            bad = j if bad is None else min(bad, j)
    return bad


def compare(report: ValidationReport, name: str, lhs, rhs) -> bool:
    if lhs.shape != rhs.shape:
        report.add(name, False, detail=f"shape mismatch {lhs.shape} vs {rhs.shape}")
        return False
    w = first_differing_column(lhs, rhs)
    report.add(name, w is None, w)
    return w is None
