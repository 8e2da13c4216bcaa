"""Validation reports for model hypotheses.

Validators never raise on a bad value; they collect one record per violated
hypothesis so a caller (or the CLI) can show everything that is wrong at
once. Structural problems, by contrast, raise at construction time.
"""

from __future__ import annotations

from dataclasses import dataclass, field

__all__ = ["Violation", "ValidationReport"]


@dataclass(frozen=True)
class Violation:
    """One violated hypothesis.

    Args:
        code: stable machine-readable slug (e.g. ``"excess-return-nonpositive"``).
        message: human-readable description, naming the offending segment.
        segment: index of the coefficient segment at fault, None if global.
    """

    code: str
    message: str
    segment: int | None = None

    def __str__(self) -> str:
        return self.message


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of validating a model component; empty means valid."""

    violations: tuple[Violation, ...] = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __str__(self) -> str:
        if self.ok:
            return "valid"
        return "; ".join(str(v) for v in self.violations)

    @staticmethod
    def combine(*reports: "ValidationReport") -> "ValidationReport":
        merged: tuple[Violation, ...] = ()
        for rep in reports:
            merged = merged + rep.violations
        return ValidationReport(merged)
