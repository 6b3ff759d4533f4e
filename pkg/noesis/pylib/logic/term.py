"""
Terms: constants, sorted variables, fluent references, and integer arithmetic.

Terms evaluate against a single world plus a variable environment. Rational
constants exist so likelihood expressions can be written as terms; arithmetic
works on any mix of integers and rationals but never on named constants.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING

from noesis.pylib.errors import SortMismatchError, UnboundVariableError
from noesis.pylib.logic.sort import Sort

if TYPE_CHECKING:
    from noesis.pylib.world import World

Env = dict[str, int | str]

# Static kinds used by the sort checker. Enumerated sorts stand for themselves.
INTEGER = "integer"
RATIONAL = "rational"


class Term:
    def evaluate(self, world: "World | None", env: Env):
        raise NotImplementedError

    def substitute(self, mapping: dict[str, "Term"]) -> "Term":
        raise NotImplementedError

    def free_vars(self) -> frozenset[str]:
        raise NotImplementedError

    def fluents(self) -> frozenset[str]:
        raise NotImplementedError

    def kind(self) -> str | Sort:
        raise NotImplementedError

    def is_ground(self) -> bool:
        return not self.free_vars() and not self.fluents()


@dataclass(frozen=True)
class Const(Term):
    value: int | str | Fraction
    sort: Sort | None = None  # Only named constants carry their enumeration sort

    def evaluate(self, world, env):
        return self.value

    def substitute(self, mapping):
        return self

    def free_vars(self):
        return frozenset()

    def fluents(self):
        return frozenset()

    def kind(self):
        if self.sort is not None:
            return self.sort
        if isinstance(self.value, Fraction):
            return RATIONAL
        return INTEGER


@dataclass(frozen=True)
class Var(Term):
    name: str
    sort: Sort

    def evaluate(self, world, env):
        if self.name not in env:
            raise UnboundVariableError(self.name)
        return self.sort.check(self.name, env[self.name])

    def substitute(self, mapping):
        return mapping.get(self.name, self)

    def free_vars(self):
        return frozenset([self.name])

    def fluents(self):
        return frozenset()

    def kind(self):
        return self.sort if not self.sort.is_integer else INTEGER


@dataclass(frozen=True)
class FluentRef(Term):
    name: str
    sort: Sort

    def evaluate(self, world, env):
        if world is None:
            msg = f"fluent {self.name} used where no world is available"
            raise SortMismatchError(msg)
        return world[self.name]

    def substitute(self, mapping):
        return self

    def free_vars(self):
        return frozenset()

    def fluents(self):
        return frozenset([self.name])

    def kind(self):
        return self.sort if not self.sort.is_integer else INTEGER


def number(value, where: str):
    if isinstance(value, str) or isinstance(value, bool):
        msg = f"{where}: arithmetic on the named constant {value!r}"
        raise SortMismatchError(msg)
    return value


def numeric_kind(*kinds) -> str:
    for kind in kinds:
        if isinstance(kind, Sort):
            msg = f"arithmetic on a term of sort {kind.name}"
            raise SortMismatchError(msg)
    return RATIONAL if RATIONAL in kinds else INTEGER


@dataclass(frozen=True)
class BinOp(Term):
    op: str  # "+" or "-"
    left: Term
    right: Term

    def evaluate(self, world, env):
        left = number(self.left.evaluate(world, env), self.op)
        right = number(self.right.evaluate(world, env), self.op)
        return left + right if self.op == "+" else left - right

    def substitute(self, mapping):
        return BinOp(
            self.op, self.left.substitute(mapping), self.right.substitute(mapping)
        )

    def free_vars(self):
        return self.left.free_vars() | self.right.free_vars()

    def fluents(self):
        return self.left.fluents() | self.right.fluents()

    def kind(self):
        return numeric_kind(self.left.kind(), self.right.kind())


@dataclass(frozen=True)
class Neg(Term):
    operand: Term

    def evaluate(self, world, env):
        return -number(self.operand.evaluate(world, env), "-")

    def substitute(self, mapping):
        return Neg(self.operand.substitute(mapping))

    def free_vars(self):
        return self.operand.free_vars()

    def fluents(self):
        return self.operand.fluents()

    def kind(self):
        return numeric_kind(self.operand.kind())


@dataclass(frozen=True)
class Abs(Term):
    operand: Term

    def evaluate(self, world, env):
        return abs(number(self.operand.evaluate(world, env), "abs"))

    def substitute(self, mapping):
        return Abs(self.operand.substitute(mapping))

    def free_vars(self):
        return self.operand.free_vars()

    def fluents(self):
        return self.operand.fluents()

    def kind(self):
        return numeric_kind(self.operand.kind())


def compatible(left, right) -> bool:
    """Numbers compare with numbers; named constants only within one sort."""
    left_sorted = isinstance(left, Sort)
    right_sorted = isinstance(right, Sort)
    if left_sorted or right_sorted:
        return left_sorted and right_sorted and left.name == right.name
    return True


def kind_name(kind) -> str:
    return kind.name if isinstance(kind, Sort) else kind
