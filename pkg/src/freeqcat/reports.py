"""Shared result containers and exceptions."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


class CapExceededError(RuntimeError):
    """Raised when an enumeration would exceed the configured presheaf cap."""

    def __init__(self, cap: int, what: str = "presheaves"):
        super().__init__(f"enumeration cap exceeded: more than {cap} {what}")
        self.cap = cap


class TypeMismatchError(ValueError):
    pass


class NotFaithfulError(ValueError):
    def __init__(self, witness: tuple[str, str]):
        super().__init__(
            f"functor is not faithful: {witness[0]!r} and {witness[1]!r} "
            "are parallel and have the same image"
        )
        self.witness = witness


@dataclass(frozen=True)
class Violation:
    kind: str
    witness: tuple
    message: str = ""

    def __str__(self):
        return f"{self.kind} at {self.witness}: {self.message}" if self.message else f"{self.kind} at {self.witness}"


@dataclass
class ValidationReport:
    """A list of violated invariants. Empty means valid."""

    violations: list[Violation] = field(default_factory=list)

    def add(self, kind, witness, message=""):
        self.violations.append(Violation(kind, tuple(witness), message))

    @property
    def ok(self) -> bool:
        return not self.violations

    def kinds(self) -> set[str]:
        return {v.kind for v in self.violations}

    def __len__(self):
        return len(self.violations)

    def __iter__(self):
        return iter(self.violations)

    def __bool__(self):
        # a report is truthy when it has something to report
        return bool(self.violations)

    def __str__(self):
        if not self.violations:
            return "ok"
        return "\n".join(str(v) for v in self.violations)


@dataclass
class Decision:
    """Outcome of a decision procedure with its evidence.

    ``witnesses`` maps each checked item to the chosen witness when the
    verdict is true; ``failures`` lists every item without one, and
    ``counterexample`` is the first of them in canonical order.
    """

    value: bool
    witnesses: dict[Any, Any] = field(default_factory=dict)
    failures: list[Any] = field(default_factory=list)
    detail: dict[str, Any] = field(default_factory=dict)

    @property
    def counterexample(self):
        return self.failures[0] if self.failures else None

    def __bool__(self):
        return self.value
