"""Diagnostic records and verification reports.

Every check in the kernel reports through one of two shapes: a
:class:`Diagnostic` for a single judgement (one span, one family, one
container) and a :class:`VerifyReport` for a whole suite of instances.
Both serialize deterministically; report JSON is byte-stable across runs
except for the ``elapsed_ms`` and ``version`` fields.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

__version__ = "0.1.0"


@dataclass
class Diagnostic:
    """Outcome of a single check.

    ``vacuous`` marks checks whose hypothesis was unsatisfiable; they pass
    but are counted separately so a suite cannot look green by never
    exercising its conclusion.
    """

    check: str
    passed: bool
    vacuous: bool = False
    details: dict[str, Any] = field(default_factory=dict)

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "check": self.check,
            "passed": self.passed,
            "vacuous": self.vacuous,
            "details": self.details,
        }


@dataclass
class Failure:
    """One failing instance inside a suite."""

    inputs: dict[str, Any]
    expected: str
    got: str

    def to_json_dict(self) -> dict[str, Any]:
        return {"inputs": self.inputs, "expected": self.expected, "got": self.got}


@dataclass
class VerifyReport:
    """Aggregate result of a verification suite.

    Invariant: ``passed`` is true exactly when ``failures`` is empty.
    """

    suite: str
    pred: str
    cases: int = 0
    vacuous: int = 0
    failures: list[Failure] = field(default_factory=list)
    seed: int = 0
    elapsed_ms: int = 0
    version: str = __version__
    witness: dict[str, Any] | None = None  # negative-control finding, if any

    @property
    def passed(self) -> bool:
        return not self.failures

    def add_failure(self, inputs: dict[str, Any], expected: str, got: str) -> None:
        self.failures.append(Failure(inputs, expected, got))

    def to_json_dict(self) -> dict[str, Any]:
        out = {
            "suite": self.suite,
            "pred": self.pred,
            "cases": self.cases,
            "vacuous": self.vacuous,
            "failures": [f.to_json_dict() for f in self.failures],
            "seed": self.seed,
            "elapsed_ms": self.elapsed_ms,
            "version": self.version,
        }
        if self.witness is not None:
            out["witness"] = self.witness
        return out

    def summary_line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (
            f"suite={self.suite} pred={self.pred} cases={self.cases} "
            f"vacuous={self.vacuous} failures={len(self.failures)} {status}"
        )
