"""Line-oriented check reports shared by every verifier and the CLI.

Human format, one line per check:   CHECK <name> PASS|FAIL [witness ...]
Machine format (summary files):     <name>=PASS|FAIL
"""

from __future__ import annotations

from dataclasses import dataclass, field

__all__ = ["CheckResult", "CheckReport"]


@dataclass
class CheckResult:
    name: str
    passed: bool
    witness: str | None = None
    info: str | None = None

    def line(self) -> str:
        out = f"CHECK {self.name} {'PASS' if self.passed else 'FAIL'}"
        if not self.passed and self.witness:
            out += f" witness {self.witness}"
        if self.passed and self.info:
            out += f" [{self.info}]"
        return out


@dataclass
class CheckReport:
    results: list[CheckResult] = field(default_factory=list)

    def add(self, name: str, passed: bool, witness: str | None = None,
            info: str | None = None) -> CheckResult:
        r = CheckResult(name, bool(passed), witness, info)
        self.results.append(r)
        return r

    def extend(self, other: "CheckReport", prefix: str = "") -> None:
        for r in other.results:
            self.results.append(
                CheckResult(prefix + r.name, r.passed, r.witness, r.info)
            )

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def lines(self) -> list[str]:
        return [r.line() for r in self.results]

    def summary_lines(self) -> list[str]:
        return [f"{r.name}={'PASS' if r.passed else 'FAIL'}" for r in self.results]

    def write_summary(self, path: str) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("\n".join(self.summary_lines()) + "\n")

    def __str__(self) -> str:
        return "\n".join(self.lines())
