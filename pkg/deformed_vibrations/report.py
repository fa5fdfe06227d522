"""Named residual checks and the report that collects them."""

from __future__ import annotations

import json

from pydantic import BaseModel, ConfigDict, Field

from deformed_vibrations import utils
from deformed_vibrations.fock import OperatorMatrix


class CheckResult(BaseModel):
    """One identity check: its residual against a tolerance."""

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    name: str
    relation: str = Field(serialization_alias="paper_ref")
    residual: float
    tolerance: float
    passed: bool = Field(serialization_alias="pass")

    @classmethod
    def from_residual(
        cls,
        name: str,
        relation: str,
        residual: float,
        tolerance: float,
    ) -> CheckResult:
        """Build a check from a scalar residual, coercing numpy scalars."""
        return cls(
            name=name,
            relation=relation,
            residual=float(residual),
            tolerance=float(tolerance),
            passed=bool(residual <= tolerance),
        )

    @classmethod
    def from_operator(
        cls,
        name: str,
        relation: str,
        difference: OperatorMatrix,
        tolerance: float,
        projector: OperatorMatrix | None = None,
    ) -> CheckResult:
        """Check that ``difference`` (optionally projected as PdP) vanishes."""
        if projector is not None:
            difference = difference.project(projector)
        return cls.from_residual(name, relation, difference.max_abs(), tolerance)


class VerificationReport(BaseModel):
    """Ordered collection of checks; passes iff every check passes."""

    model_config = ConfigDict(frozen=True)

    checks: tuple[CheckResult, ...] = ()

    @property
    def passed(self) -> bool:
        """True when every check passed."""
        return all(check.passed for check in self.checks)

    def failures(self) -> list[CheckResult]:
        """Checks that did not pass, in report order."""
        return [check for check in self.checks if not check.passed]

    def check(self, name: str) -> CheckResult:
        """Look a check up by name.

        :raises KeyError: If no check has that name.
        """
        for check in self.checks:
            if check.name == name:
                return check
        raise KeyError(name)

    def __add__(self, other: VerificationReport) -> VerificationReport:
        return VerificationReport(checks=self.checks + other.checks)

    def prefixed(self, prefix: str) -> VerificationReport:
        """Same checks with ``prefix`` prepended to every name."""
        return VerificationReport(
            checks=tuple(
                check.model_copy(update={"name": prefix + check.name})
                for check in self.checks
            ),
        )

    def to_json(self) -> str:
        """Deterministic JSON document, one object per check."""
        payload = [
            {
                "name": check.name,
                "paper_ref": check.relation,
                "residual": utils.round_significant(check.residual),
                "tolerance": check.tolerance,
                "pass": check.passed,
            }
            for check in self.checks
        ]
        return json.dumps(
            {"passed": self.passed, "checks": payload},
            indent=2,
        ) + "\n"
