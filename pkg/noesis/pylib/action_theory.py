"""
Basic action theories over functional fluents.

An action schema has agent parameters, chosen by the program, followed by
nature parameters chosen by the environment. Hidden nature parameters are
erased from what the agent observes; sensed ones are observed. Likelihoods are
evaluated in the world where the action happens and, for every issued action,
must sum to one over its outcomes.
"""

import hashlib
import itertools
import logging
from dataclasses import dataclass, field
from enum import StrEnum
from fractions import Fraction
from functools import cached_property

from noesis.pylib.belief import BeliefState, normalize
from noesis.pylib.errors import EvaluationError, NoesisError
from noesis.pylib.logic.formula import TRUE, Formula
from noesis.pylib.logic.sort import Sort
from noesis.pylib.logic.term import INTEGER, RATIONAL, Const, Env, Term, Var, compatible
from noesis.pylib.util import Value, rational_str, value_key
from noesis.pylib.world import World


class ParamKind(StrEnum):
    AGENT = "agent"
    HIDDEN = "hidden"
    SENSED = "sensed"


@dataclass(frozen=True)
class DomainRange:
    lo: Term
    hi: Term


@dataclass(frozen=True)
class Param:
    name: str
    sort: Sort
    kind: ParamKind = ParamKind.AGENT
    domain: tuple[Term | DomainRange, ...] = ()  # Empty means the whole carrier

    @property
    def var(self) -> Var:
        return Var(self.name, self.sort)

    @property
    def is_nature(self) -> bool:
        return self.kind != ParamKind.AGENT

    def values(self, env: Env) -> list[Value]:
        if not self.domain:
            return list(self.sort.carrier)
        found = set()
        for item in self.domain:
            if isinstance(item, DomainRange):
                lo = item.lo.evaluate(None, env)
                hi = item.hi.evaluate(None, env)
                if not isinstance(lo, int) or not isinstance(hi, int):
                    msg = f"range {lo}..{hi} for {self.name} is not over integers"
                    raise EvaluationError(msg)
                found.update(range(lo, hi + 1))
            else:
                found.add(item.evaluate(None, env))
        for value in found:
            self.sort.check(self.name, value)
        return sorted(found, key=value_key)


@dataclass(frozen=True)
class ActionSchema:
    name: str
    params: tuple[Param, ...] = ()
    poss: Formula = TRUE
    likelihood: Term = Const(1)
    effects: tuple[tuple[str, Term], ...] = ()

    @property
    def agent_params(self) -> tuple[Param, ...]:
        return tuple(p for p in self.params if not p.is_nature)

    @property
    def nature_params(self) -> tuple[Param, ...]:
        return tuple(p for p in self.params if p.is_nature)

    def env(self, agent_args, outcome_args=()) -> Env:
        names = [p.name for p in self.agent_params] + [
            p.name for p in self.nature_params
        ]
        return dict(zip(names, (*agent_args, *outcome_args), strict=True))


def call_str(name: str, args) -> str:
    return f"{name}({', '.join(str(a) for a in args)})"


@dataclass(frozen=True)
class IssuedAction:
    """What the program asks for: the agent arguments only."""

    name: str
    agent_args: tuple[Value, ...] = ()

    def __str__(self) -> str:
        return call_str(self.name, self.agent_args)


@dataclass(frozen=True)
class Observation:
    name: str
    agent_args: tuple[Value, ...] = ()
    outcome_args: tuple[Value | None, ...] = ()  # None marks an erased argument

    def __str__(self) -> str:
        shown = ["_" if a is None else a for a in self.outcome_args]
        return call_str(self.name, (*self.agent_args, *shown))


@dataclass(frozen=True)
class GroundAction:
    name: str
    agent_args: tuple[Value, ...] = ()
    outcome_args: tuple[Value, ...] = ()
    hidden: tuple[bool, ...] = ()

    @property
    def issued(self) -> IssuedAction:
        return IssuedAction(self.name, self.agent_args)

    def __str__(self) -> str:
        return call_str(self.name, (*self.agent_args, *self.outcome_args))


def observation_of(action: GroundAction) -> Observation:
    outcome = tuple(
        None if hidden else arg
        for arg, hidden in zip(action.outcome_args, action.hidden, strict=True)
    )
    return Observation(action.name, action.agent_args, outcome)


@dataclass(frozen=True)
class ValidationIssue:
    where: str  # e.g. "action move", "initial belief"
    message: str

    def __str__(self) -> str:
        return f"{self.where}: {self.message}"


@dataclass
class ValidationReport:
    issues: list[ValidationIssue] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.issues

    def add(self, where: str, message: str) -> None:
        self.issues.append(ValidationIssue(where, message))


# Compared by identity; equal theories share a digest
@dataclass(frozen=True, eq=False)
class BAT:
    name: str
    sorts: dict[str, Sort]
    fluents: dict[str, Sort]
    actions: dict[str, ActionSchema]
    initial: tuple[tuple[World, Fraction], ...]
    actual: World | None = None
    spans: dict = field(default_factory=dict, repr=False)

    @cached_property
    def initial_belief(self) -> BeliefState:
        return normalize(self.initial)

    @cached_property
    def _outcomes(self) -> dict:
        return {}

    @cached_property
    def digest(self) -> str:
        from noesis.pylib.frontend.printer import print_bat  # noqa: PLC0415

        return hashlib.sha256(print_bat(self).encode("utf-8")).hexdigest()

    def schema(self, name: str) -> ActionSchema:
        if name not in self.actions:
            msg = f"unknown action {name}"
            raise EvaluationError(msg)
        return self.actions[name]

    def world(self, assignments) -> World:
        assignments = dict(assignments)
        missing = [f for f in self.fluents if f not in assignments]
        if missing:
            msg = f"no value for fluent {', '.join(missing)}"
            raise EvaluationError(msg)
        for fluent, value in assignments.items():
            if fluent not in self.fluents:
                msg = f"unknown fluent {fluent}"
                raise EvaluationError(msg)
            self.fluents[fluent].check(fluent, value)
        return World.of(assignments)

    def all_worlds(self) -> list[World]:
        names = list(self.fluents)
        carriers = [self.fluents[n].carrier for n in names]
        return [World.of(zip(names, combo)) for combo in itertools.product(*carriers)]

    def issued_actions(self) -> list[IssuedAction]:
        issued = []
        for schema in self.actions.values():
            carriers = [p.sort.carrier for p in schema.agent_params]
            issued.extend(
                IssuedAction(schema.name, combo)
                for combo in itertools.product(*carriers)
            )
        return issued

    def check_issued(self, issued: IssuedAction) -> ActionSchema:
        schema = self.schema(issued.name)
        params = schema.agent_params
        if len(params) != len(issued.agent_args):
            msg = (
                f"{issued.name} takes {len(params)} argument(s), "
                f"got {len(issued.agent_args)}"
            )
            raise EvaluationError(msg)
        for param, arg in zip(params, issued.agent_args, strict=True):
            param.sort.check(param.name, arg)
        return schema

    def outcomes(self, issued: IssuedAction) -> list[GroundAction]:
        """Every way nature can complete the issued action, in canonical order."""
        if issued in self._outcomes:
            return self._outcomes[issued]

        schema = self.check_issued(issued)
        pairs = zip(schema.agent_params, issued.agent_args, strict=True)
        env = {p.name: v for p, v in pairs}
        domains = [p.values(env) for p in schema.nature_params]
        for param, values in zip(schema.nature_params, domains, strict=True):
            if not values:
                msg = f"empty outcome domain for {param.name} of {issued}"
                raise EvaluationError(msg)

        hidden = tuple(p.kind == ParamKind.HIDDEN for p in schema.nature_params)
        actions = [
            GroundAction(issued.name, issued.agent_args, combo, hidden)
            for combo in itertools.product(*domains)
        ]
        self._outcomes[issued] = actions
        return actions

    def explanations(self, observation: Observation) -> list[GroundAction]:
        """Ground actions the agent cannot tell apart from this observation."""
        issued = IssuedAction(observation.name, observation.agent_args)
        return [a for a in self.outcomes(issued) if observation_of(a) == observation]

    def ground(self, name: str, agent_args, outcome_args) -> GroundAction:
        issued = IssuedAction(name, tuple(agent_args))
        outcome_args = tuple(outcome_args)
        for action in self.outcomes(issued):
            if action.outcome_args == outcome_args:
                return action
        text = call_str(name, (*agent_args, *outcome_args))
        msg = f"{text} is not an outcome of {issued}"
        raise EvaluationError(msg)

    def env(self, action: GroundAction) -> Env:
        return self.schema(action.name).env(action.agent_args, action.outcome_args)

    def poss(self, world: World, action: GroundAction) -> bool:
        schema = self.schema(action.name)
        return schema.poss.holds(world, self.env(action))

    def likelihood(self, world: World, action: GroundAction) -> Fraction:
        schema = self.schema(action.name)
        value = schema.likelihood.evaluate(world, self.env(action))
        if isinstance(value, str):
            msg = f"likelihood of {action} is the named constant {value}"
            raise EvaluationError(msg)
        value = Fraction(value)
        if value < 0:
            msg = f"likelihood of {action} is negative ({rational_str(value)})"
            raise EvaluationError(msg)
        return value

    def progress(self, world: World, action: GroundAction) -> World:
        schema = self.schema(action.name)
        env = self.env(action)
        updates = {
            fluent: self.fluents[fluent].check(fluent, term.evaluate(world, env))
            for fluent, term in schema.effects
        }
        return world.replace(updates)

    def validate(self, worlds: list[World] | None = None) -> ValidationReport:
        report = ValidationReport()
        for schema in self.actions.values():
            self._validate_schema(schema, report)
        self._validate_initial(report)
        if report.ok:
            self._validate_likelihoods(worlds, report)
        for issue in report.issues:
            msg = f"{self.name}: {issue}"
            logging.info(msg)
        return report

    def _validate_schema(self, schema: ActionSchema, report: ValidationReport) -> None:
        where = f"action {schema.name}"
        names = {p.name for p in schema.params}
        seen_nature = False
        for param in schema.params:
            if param.is_nature:
                seen_nature = True
            elif seen_nature:
                msg = f"agent parameter {param.name} follows a nature parameter"
                report.add(where, msg)

        parts = [("poss", schema.poss), ("likelihood", schema.likelihood)]
        parts += [(f"effect on {f}", t) for f, t in schema.effects]
        for label, part in parts:
            unbound = part.free_vars() - names
            if unbound:
                report.add(where, f"{label} uses unbound {', '.join(sorted(unbound))}")
            unknown = part.fluents() - set(self.fluents)
            if unknown:
                listed = ", ".join(sorted(unknown))
                report.add(where, f"{label} uses unknown fluent {listed}")

        try:
            schema.poss.check_sorts()
            if not schema.poss.is_objective():
                report.add(where, "precondition must be objective")
            if isinstance(schema.likelihood.kind(), Sort):
                report.add(where, "likelihood must be numeric")
            for fluent, term in schema.effects:
                self._validate_effect(where, fluent, term, report)
        except NoesisError as err:
            report.add(where, str(err))

    def _validate_effect(self, where, fluent, term, report) -> None:
        if fluent not in self.fluents:
            report.add(where, f"effect on unknown fluent {fluent}")
            return
        sort = self.fluents[fluent]
        kind = term.kind()
        expected = sort if not sort.is_integer else INTEGER
        if kind == RATIONAL or not compatible(expected, kind):
            report.add(where, f"effect on {fluent} does not have sort {sort.name}")

    def _validate_initial(self, report: ValidationReport) -> None:
        where = "initial belief"
        if not self.initial:
            report.add(where, "no initial worlds")
            return
        for world, weight in self.initial:
            try:
                self.world(world)
            except NoesisError as err:
                report.add(where, f"{world}: {err}")
            if weight <= 0:
                report.add(where, f"{world} has non-positive weight {weight}")
        total = sum((w for _, w in self.initial), start=Fraction(0))
        if total != 1:
            report.add(where, f"weights sum to {rational_str(total)}, not 1")
        if self.actual is not None:
            try:
                self.world(self.actual)
                if all(w != self.actual for w, _ in self.initial):
                    report.add("initial actual", f"{self.actual} is not a believed world")
            except NoesisError as err:
                report.add("initial actual", str(err))

    def _validate_likelihoods(self, worlds, report: ValidationReport) -> None:
        worlds = self.all_worlds() if worlds is None else worlds
        for issued in self.issued_actions():
            where = f"action {issued.name}"
            try:
                outcomes = self.outcomes(issued)
            except NoesisError as err:
                report.add(where, f"{issued}: {err}")
                continue
            for world in worlds:
                try:
                    total = sum(
                        (self.likelihood(world, a) for a in outcomes),
                        start=Fraction(0),
                    )
                except NoesisError as err:
                    report.add(where, f"{issued} in {world}: {err}")
                    break
                if total != 1:
                    msg = f"likelihoods of {issued} sum to {rational_str(total)} in {world}"
                    report.add(where, msg)
                    break
