"""Reports, violations and the error hierarchy shared by every module."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

DEFAULT_BUDGET = 10**6


class LingrothError(Exception):
    """Base class for all errors raised by this package."""


class MalformedError(LingrothError):
    """Structurally ill-formed input: dangling ids, non-total tables, wrong endpoints.

    Kept distinct from law violations, which are reported rather than raised.
    """


class AxiomError(LingrothError):
    """A constructor was handed tables that violate the algebraic axioms."""

    def __init__(self, report: "ValidationReport"):
        self.report = report
        first = report.violations[0]
        super().__init__(f"{report.subject}: axiom '{first.law}' fails at {first.witness}")


class BudgetExceeded(LingrothError):
    """An exhaustive enumeration would exceed its configured budget."""

    def __init__(self, what: str, needed: int, budget: int):
        self.what = what
        self.needed = needed
        self.budget = budget
        super().__init__(f"{what}: {needed} items needed, budget is {budget}")


def guard(what: str, needed: int, budget: int) -> None:
    if needed > budget:
        raise BudgetExceeded(what, needed, budget)


@dataclass
class Violation:
    """One failed law instance.

    ``witness`` holds element/morphism identifiers (strings) sufficient to
    re-evaluate the law; ``lhs``/``rhs`` are the two evaluated sides.
    """

    law: str
    witness: dict[str, Any] = field(default_factory=dict)
    lhs: Any = None
    rhs: Any = None

    def to_dict(self) -> dict:
        out: dict[str, Any] = {"law": self.law, "witness": dict(self.witness)}
        if self.lhs is not None or self.rhs is not None:
            out["lhs"] = self.lhs
            out["rhs"] = self.rhs
        return out


@dataclass
class ValidationReport:
    subject: str
    violations: list[Violation] = field(default_factory=list)
    checked: int = 0

    @property
    def ok(self) -> bool:
        return not self.violations

    def laws(self) -> set[str]:
        return {v.law for v in self.violations}

    def add(self, law: str, lhs: Any = None, rhs: Any = None, **witness: Any) -> None:
        self.violations.append(Violation(law, witness, lhs, rhs))

    def extend(self, other: "ValidationReport", prefix: str = "") -> None:
        for v in other.violations:
            self.violations.append(Violation(prefix + v.law, v.witness, v.lhs, v.rhs))
        self.checked += other.checked

    def to_dict(self) -> dict:
        return {
            "subject": self.subject,
            "ok": self.ok,
            "checked": self.checked,
            "violations": [v.to_dict() for v in self.violations],
        }
