from dataclasses import dataclass, field
from enum import StrEnum
from fractions import Fraction

from noesis.pylib.action_theory import GroundAction, IssuedAction, Observation
from noesis.pylib.belief import BeliefState
from noesis.pylib.logic.formula import Formula


class Status(StrEnum):
    COMPLETED = "completed"
    FAILED = "failed"
    STEP_LIMIT = "step-limit"


@dataclass(frozen=True)
class GuardRecord:
    """One guard evaluation and the knowledge it relied on."""

    cond: Formula
    value: bool
    known: tuple[Formula, ...] = ()


@dataclass(frozen=True)
class TraceStep:
    i: int
    issued: IssuedAction
    actual: GroundAction
    observed: Observation
    belief: BeliefState | None = None
    probability: Fraction = field(default=Fraction(1), compare=False)
    guards: tuple[GuardRecord, ...] = field(default=(), compare=False)


@dataclass
class Trace:
    steps: list[TraceStep] = field(default_factory=list)
    status: Status = Status.COMPLETED
    reason: str = ""
    oracle: dict = field(default_factory=dict)
    bat_digest: str = ""
    unused: int = field(default=0, compare=False)
    final_guards: tuple[GuardRecord, ...] = field(default=(), compare=False)

    def actions(self) -> list[GroundAction]:
        return [s.actual for s in self.steps]

    def probability(self) -> Fraction:
        """Chance that nature picks exactly these outcomes."""
        result = Fraction(1)
        for s in self.steps:
            result *= s.probability
        return result

    @property
    def completed(self) -> bool:
        return self.status == Status.COMPLETED
