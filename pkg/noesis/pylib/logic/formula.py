"""
Objective and epistemic formulas.

Objective formulas are evaluated against one world. Epistemic atoms `bel(φ) ⋈ r`
and `know(φ)` are evaluated against a weighted belief state and may only contain
objective bodies. Quantifiers range over finite sorts and are expanded.
"""

import operator
from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING

from noesis.pylib.errors import EvaluationError, NestedBeliefError, SortMismatchError
from noesis.pylib.logic.sort import Sort
from noesis.pylib.logic.term import (
    Const,
    Env,
    Term,
    Var,
    compatible,
    kind_name,
    numeric_kind,
)

if TYPE_CHECKING:
    from noesis.pylib.belief import BeliefState
    from noesis.pylib.world import World

COMPARATORS = {
    "=": operator.eq,
    "<=": operator.le,
    "<": operator.lt,
    ">=": operator.ge,
    ">": operator.gt,
}

ORDERED = frozenset(["<=", "<", ">=", ">"])


class Formula:
    def holds(self, world: "World | None", env: Env) -> bool:
        raise NotImplementedError

    def believed(self, belief: "BeliefState", env: Env) -> bool:
        """Subjective truth: objective parts count only when known."""
        if self.is_objective():
            return degree_of_belief(self, belief, env) == 1
        raise NotImplementedError

    def is_objective(self) -> bool:
        return True

    def substitute(self, mapping: dict[str, Term]) -> "Formula":
        raise NotImplementedError

    def free_vars(self) -> frozenset[str]:
        raise NotImplementedError

    def fluents(self) -> frozenset[str]:
        raise NotImplementedError

    def simplify(self) -> "Formula":
        return self

    def check_sorts(self) -> None:
        return None

    def is_support_determined(self) -> bool:
        return True

    def is_ground(self) -> bool:
        return self.is_objective() and not self.free_vars() and not self.fluents()

    def epistemic_atoms(self) -> list["Bel"]:
        return []


@dataclass(frozen=True)
class Truth(Formula):
    value: bool

    def holds(self, world, env):
        return self.value

    def believed(self, belief, env):
        return self.value

    def substitute(self, mapping):
        return self

    def free_vars(self):
        return frozenset()

    def fluents(self):
        return frozenset()


TRUE = Truth(True)
FALSE = Truth(False)


@dataclass(frozen=True)
class Compare(Formula):
    op: str
    left: Term
    right: Term

    def holds(self, world, env):
        left = self.left.evaluate(world, env)
        right = self.right.evaluate(world, env)
        left_named = isinstance(left, str)
        right_named = isinstance(right, str)
        if left_named != right_named:
            msg = f"cannot compare {left!r} with {right!r}"
            raise SortMismatchError(msg)
        if left_named and self.op != "=":
            msg = f"ordering {self.op} applied to named constants {left!r}, {right!r}"
            raise SortMismatchError(msg)
        return COMPARATORS[self.op](left, right)

    def substitute(self, mapping):
        return Compare(
            self.op, self.left.substitute(mapping), self.right.substitute(mapping)
        )

    def free_vars(self):
        return self.left.free_vars() | self.right.free_vars()

    def fluents(self):
        return self.left.fluents() | self.right.fluents()

    def simplify(self):
        if self.left.is_ground() and self.right.is_ground():
            return Truth(self.holds(None, {}))
        return self

    def check_sorts(self):
        left, right = self.left.kind(), self.right.kind()
        if not compatible(left, right):
            msg = f"sort mismatch: {kind_name(left)} {self.op} {kind_name(right)}"
            raise SortMismatchError(msg)
        if self.op in ORDERED:
            numeric_kind(left, right)


@dataclass(frozen=True)
class Not(Formula):
    body: Formula

    def holds(self, world, env):
        return not self.body.holds(world, env)

    def believed(self, belief, env):
        if self.is_objective():
            return super().believed(belief, env)
        return not self.body.believed(belief, env)

    def is_objective(self):
        return self.body.is_objective()

    def substitute(self, mapping):
        return Not(self.body.substitute(mapping))

    def free_vars(self):
        return self.body.free_vars()

    def fluents(self):
        return self.body.fluents()

    def simplify(self):
        body = self.body.simplify()
        if isinstance(body, Truth):
            return Truth(not body.value)
        return Not(body)

    def check_sorts(self):
        self.body.check_sorts()

    def is_support_determined(self):
        return self.body.is_support_determined()

    def epistemic_atoms(self):
        return self.body.epistemic_atoms()


class Junction(Formula):
    parts: tuple[Formula, ...]
    unit: bool  # value of the empty junction

    def is_objective(self):
        return all(p.is_objective() for p in self.parts)

    def free_vars(self):
        return frozenset().union(*(p.free_vars() for p in self.parts))

    def fluents(self):
        return frozenset().union(*(p.fluents() for p in self.parts))

    def check_sorts(self):
        for part in self.parts:
            part.check_sorts()

    def is_support_determined(self):
        return all(p.is_support_determined() for p in self.parts)

    def epistemic_atoms(self):
        return [a for p in self.parts for a in p.epistemic_atoms()]

    def simplify(self):
        parts = []
        for part in self.parts:
            part = part.simplify()
            if isinstance(part, Truth):
                if part.value != self.unit:
                    return part
                continue
            parts.append(part)
        return join(type(self), parts)


@dataclass(frozen=True)
class And(Junction):
    parts: tuple[Formula, ...]
    unit = True

    def holds(self, world, env):
        return all(p.holds(world, env) for p in self.parts)

    def believed(self, belief, env):
        if self.is_objective():
            return super().believed(belief, env)
        return all(p.believed(belief, env) for p in self.parts)

    def substitute(self, mapping):
        return And(tuple(p.substitute(mapping) for p in self.parts))


@dataclass(frozen=True)
class Or(Junction):
    parts: tuple[Formula, ...]
    unit = False

    def holds(self, world, env):
        return any(p.holds(world, env) for p in self.parts)

    def believed(self, belief, env):
        if self.is_objective():
            return super().believed(belief, env)
        return any(p.believed(belief, env) for p in self.parts)

    def substitute(self, mapping):
        return Or(tuple(p.substitute(mapping) for p in self.parts))


def join(kind: type[Junction], parts) -> Formula:
    """Build a conjunction/disjunction, collapsing trivial cases."""
    parts = list(parts)
    if not parts:
        return Truth(kind.unit)
    if len(parts) == 1:
        return parts[0]
    return kind(tuple(parts))


def conj(*parts: Formula) -> Formula:
    return And(tuple(parts)).simplify()


def disj(*parts: Formula) -> Formula:
    return Or(tuple(parts)).simplify()


class Quantified(Formula):
    var: Var
    body: Formula

    def instances(self, env: Env):
        for value in self.var.sort.carrier:
            yield {**env, self.var.name: value}

    def is_objective(self):
        return self.body.is_objective()

    def substitute(self, mapping):
        inner = {k: v for k, v in mapping.items() if k != self.var.name}
        return type(self)(self.var, self.body.substitute(inner))

    def free_vars(self):
        return self.body.free_vars() - {self.var.name}

    def fluents(self):
        return self.body.fluents()

    def simplify(self):
        body = self.body.simplify()
        if isinstance(body, Truth):
            return body
        return type(self)(self.var, body)

    def check_sorts(self):
        self.body.check_sorts()

    def is_support_determined(self):
        return self.body.is_support_determined()

    def epistemic_atoms(self):
        return self.body.epistemic_atoms()


@dataclass(frozen=True)
class Exists(Quantified):
    var: Var
    body: Formula

    def holds(self, world, env):
        return any(self.body.holds(world, e) for e in self.instances(env))

    def believed(self, belief, env):
        if self.is_objective():
            return super().believed(belief, env)
        return any(self.body.believed(belief, e) for e in self.instances(env))


@dataclass(frozen=True)
class Forall(Quantified):
    var: Var
    body: Formula

    def holds(self, world, env):
        return all(self.body.holds(world, e) for e in self.instances(env))

    def believed(self, belief, env):
        if self.is_objective():
            return super().believed(belief, env)
        return all(self.body.believed(belief, e) for e in self.instances(env))


@dataclass(frozen=True)
class Bel(Formula):
    """Degree-of-belief atom: bel(body) op bound."""

    body: Formula
    op: str
    bound: Fraction

    def __post_init__(self):
        if not self.body.is_objective():
            msg = "nested epistemic operator"
            raise NestedBeliefError(msg)
        if self.op not in COMPARATORS:
            msg = f"unknown comparison {self.op}"
            raise EvaluationError(msg)
        if not 0 <= self.bound <= 1:
            msg = f"belief bound {self.bound} outside [0, 1]"
            raise EvaluationError(msg)

    def holds(self, world, env):
        msg = "epistemic atom evaluated against a single world"
        raise NestedBeliefError(msg)

    def believed(self, belief, env):
        degree = degree_of_belief(self.body, belief, env)
        return COMPARATORS[self.op](degree, self.bound)

    def is_objective(self):
        return False

    def substitute(self, mapping):
        return type(self)(self.body.substitute(mapping), self.op, self.bound)

    def free_vars(self):
        return self.body.free_vars()

    def fluents(self):
        return self.body.fluents()

    def simplify(self):
        return type(self)(self.body.simplify(), self.op, self.bound)

    def check_sorts(self):
        self.body.check_sorts()

    def is_support_determined(self):
        return self.bound in (0, 1)

    def epistemic_atoms(self):
        return [self]

    def is_knowledge(self) -> bool:
        """True for atoms whose truth means every believed world satisfies body."""
        return (self.op, self.bound) in {("=", 1), (">=", 1)}


@dataclass(frozen=True)
class Know(Bel):
    """know(body), an alias for bel(body) = 1."""

    body: Formula
    op: str = "="
    bound: Fraction = Fraction(1)

    def substitute(self, mapping):
        return Know(self.body.substitute(mapping))

    def simplify(self):
        return Know(self.body.simplify())


@dataclass(frozen=True)
class Cond(Term):
    """First matching case wins: cond ((c1) e1) ((c2) e2) (else e)."""

    cases: tuple[tuple[Formula, Term], ...]
    default: Term

    def evaluate(self, world, env):
        for test, value in self.cases:
            if test.holds(world, env):
                return value.evaluate(world, env)
        return self.default.evaluate(world, env)

    def substitute(self, mapping):
        return Cond(
            tuple((t.substitute(mapping), v.substitute(mapping)) for t, v in self.cases),
            self.default.substitute(mapping),
        )

    def free_vars(self):
        names = self.default.free_vars()
        for test, value in self.cases:
            names |= test.free_vars() | value.free_vars()
        return names

    def fluents(self):
        names = self.default.fluents()
        for test, value in self.cases:
            names |= test.fluents() | value.fluents()
        return names

    def kind(self):
        kind = self.default.kind()
        for test, value in self.cases:
            if not test.is_objective():
                msg = "epistemic operator inside a cond expression"
                raise NestedBeliefError(msg)
            test.check_sorts()
            other = value.kind()
            if not compatible(kind, other):
                msg = f"cond branches mix {kind_name(kind)} and {kind_name(other)}"
                raise SortMismatchError(msg)
            if isinstance(kind, str) and isinstance(other, str):
                kind = numeric_kind(kind, other)
        return kind


def eval_objective(phi: Formula, world: "World", env: Env | None = None) -> bool:
    if not phi.is_objective():
        msg = "eval_objective given an epistemic formula"
        raise NestedBeliefError(msg)
    return phi.holds(world, env or {})


def degree_of_belief(
    phi: Formula, belief: "BeliefState", env: Env | None = None
) -> Fraction:
    if not phi.is_objective():
        msg = "degree_of_belief needs an objective formula"
        raise NestedBeliefError(msg)
    env = env or {}
    return sum(
        (weight for world, weight in belief.items() if phi.holds(world, env)),
        start=Fraction(0),
    )


def eval_epistemic(phi: Formula, belief: "BeliefState", env: Env | None = None) -> bool:
    return phi.believed(belief, env or {})


def constant(value, sort: Sort | None = None) -> Const:
    """A constant term; named constants remember their enumeration sort."""
    if isinstance(value, str) and sort is not None:
        return Const(value, sort)
    return Const(value)
