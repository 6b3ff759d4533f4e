"""
Online execution of belief-based programs.

The agent branches only on what it believes: objective guards are read as
know(guard). Each primitive action is completed by nature in the actual world,
the actual world is progressed, and the belief is filtered through what the
agent observed.
"""

import logging
from dataclasses import dataclass, replace
from fractions import Fraction

from noesis.pylib import const
from noesis.pylib.action_theory import BAT, GroundAction, IssuedAction, observation_of
from noesis.pylib.belief import BeliefState, update
from noesis.pylib.errors import ExecutionFailure, InconsistentObservationError, NoesisError
from noesis.pylib.logic.formula import Formula, Know, Not
from noesis.pylib.oracle import NatureOracle, NatureScript, ScriptedOracle
from noesis.pylib.program import NIL, Act, If, Nil, Program, Seq, Test, While, sequence
from noesis.pylib.trace import GuardRecord, Status, Trace, TraceStep
from noesis.pylib.world import World

# Atoms whose truth means every believed world satisfies the body (or its negation)
KNOWS_BODY = {("=", 1), (">=", 1)}
KNOWS_NEGATION = {("=", 0), ("<=", 0)}


@dataclass(frozen=True)
class RunSettings:
    max_steps: int = const.MAX_STEPS
    snapshots: bool = False
    strict_poss: bool = False
    strict_guards: bool = False
    max_silent: int = const.MAX_SILENT_STEPS


@dataclass(frozen=True)
class Config:
    program: Program
    belief: BeliefState
    actual: World
    steps: int = 0


@dataclass(frozen=True)
class Done:
    config: Config
    guards: tuple[GuardRecord, ...] = ()


@dataclass(frozen=True)
class Failure:
    config: Config
    reason: str
    guards: tuple[GuardRecord, ...] = ()


@dataclass(frozen=True)
class StepLimit:
    config: Config
    guards: tuple[GuardRecord, ...] = ()


@dataclass(frozen=True)
class Advance:
    config: Config
    event: TraceStep


def known_bodies(cond: Formula, belief: BeliefState) -> tuple[Formula, ...]:
    """Objective facts the guard evaluation took as known."""
    if cond.is_objective():
        return (cond,) if Know(cond).believed(belief, {}) else ()
    known = []
    for atom in cond.epistemic_atoms():
        if atom.free_vars() or not atom.believed(belief, {}):
            continue
        if (atom.op, atom.bound) in KNOWS_BODY:
            known.append(atom.body)
        elif (atom.op, atom.bound) in KNOWS_NEGATION:
            known.append(Not(atom.body))
    return tuple(known)


def evaluate_guard(
    cond: Formula,
    belief: BeliefState,
    settings: RunSettings,
    guards: list[GuardRecord],
) -> bool:
    if cond.is_objective():
        if settings.strict_guards:
            raise ExecutionFailure("objective guard in strict mode")
        value = Know(cond).believed(belief, {})
    else:
        value = cond.believed(belief, {})
    guards.append(GuardRecord(cond, value, known_bodies(cond, belief)))
    return value


def next_action(
    config: Config, settings: RunSettings, guards: list[GuardRecord]
) -> tuple[Act, Program] | None:
    """Run silent steps until a primitive action is at the head of the program."""
    current, rest = config.program, NIL
    for _ in range(settings.max_silent):
        match current:
            case Nil():
                if isinstance(rest, Nil):
                    return None
                current, rest = rest, NIL
            case Act():
                return current, rest
            case Test(cond):
                if not evaluate_guard(cond, config.belief, settings, guards):
                    raise ExecutionFailure("test failed")
                current = NIL
            case Seq(first, second):
                current, rest = first, sequence(second, rest)
            case If(cond, then, else_):
                chosen = evaluate_guard(cond, config.belief, settings, guards)
                current = then if chosen else else_
            case While(cond, body):
                if evaluate_guard(cond, config.belief, settings, guards):
                    current, rest = body, sequence(current, rest)
                else:
                    current = NIL
    raise ExecutionFailure("silent-step limit")


def instantiate(act: Act, bat: BAT) -> IssuedAction:
    args = tuple(arg.evaluate(None, {}) for arg in act.args)
    issued = IssuedAction(act.name, args)
    bat.check_issued(issued)
    return issued


def candidates(
    config: Config, issued: IssuedAction, nature: BAT
) -> list[tuple[GroundAction, Fraction]]:
    """Outcomes nature can pick in the actual world, with their probabilities."""
    found = []
    for action in nature.outcomes(issued):
        if not nature.poss(config.actual, action):
            continue
        likelihood = nature.likelihood(config.actual, action)
        if likelihood > 0:
            found.append((action, likelihood))
    if not found:
        raise ExecutionFailure("precondition violated")
    total = sum((p for _, p in found), start=Fraction(0))
    return [(action, p / total) for action, p in found]


def check_known_poss(config: Config, issued: IssuedAction, bat: BAT) -> None:
    for world in config.belief:
        if not any(bat.poss(world, a) for a in bat.outcomes(issued)):
            raise ExecutionFailure("precondition not known")


def advance(
    config: Config,
    action: GroundAction,
    rest: Program,
    bat: BAT,
    nature: BAT | None = None,
) -> Config:
    nature = nature or bat
    actual = nature.progress(config.actual, action)
    try:
        belief = update(config.belief, observation_of(action), bat)
    except InconsistentObservationError as err:
        raise ExecutionFailure("inconsistent observation") from err
    # Only the agent's own model keeps the actual world believed
    if nature is bat and actual not in belief:
        raise ExecutionFailure("actual world left the belief support")
    return Config(rest, belief, actual, config.steps + 1)


def step(
    config: Config,
    oracle: NatureOracle,
    bat: BAT,
    settings: RunSettings,
    nature: BAT | None = None,
) -> Done | Failure | StepLimit | Advance:
    guards: list[GuardRecord] = []
    try:
        head = next_action(config, settings, guards)
        if head is None:
            return Done(config, tuple(guards))
        if config.steps >= settings.max_steps:
            return StepLimit(config, tuple(guards))

        act, rest = head
        issued = instantiate(act, bat)
        if settings.strict_poss:
            check_known_poss(config, issued, bat)
        options = candidates(config, issued, nature or bat)
        action = oracle.choose(issued, options)
        probability = next(p for a, p in options if a == action)
        new = advance(config, action, rest, bat, nature)
    except ExecutionFailure as err:
        return Failure(config, err.reason, tuple(guards))
    except NoesisError as err:
        return Failure(config, str(err), tuple(guards))

    event = TraceStep(
        i=config.steps + 1,
        issued=issued,
        actual=action,
        observed=observation_of(action),
        belief=new.belief if settings.snapshots else None,
        probability=probability,
        guards=tuple(guards),
    )
    msg = f"step {event.i}: {issued} -> {action}"
    logging.debug(msg)
    return Advance(new, event)


def initial_config(bat: BAT, program: Program, oracle: NatureOracle) -> Config:
    belief = bat.initial_belief
    actual = oracle.initial_world(belief, bat)
    if actual not in belief:
        msg = f"actual world {actual} is not a believed world"
        raise ExecutionFailure(msg)
    return Config(program, belief, actual)


def run(
    bat: BAT,
    program: Program,
    oracle: NatureOracle,
    settings: RunSettings | None = None,
    nature: BAT | None = None,
) -> tuple[Trace, Config | None]:
    settings = settings or RunSettings()
    trace = Trace(oracle=oracle.describe(), bat_digest=bat.digest)

    try:
        config = initial_config(bat, program, oracle)
    except NoesisError as err:
        trace.status, trace.reason = Status.FAILED, str(err)
        return trace, None

    while True:
        result = step(config, oracle, bat, settings, nature)
        match result:
            case Advance(new, event):
                trace.steps.append(event)
                config = new
                continue
            case Done(config, guards):
                trace.status = Status.COMPLETED
            case Failure(config, reason, guards):
                trace.status, trace.reason = Status.FAILED, reason
            case StepLimit(config, guards):
                trace.status = Status.STEP_LIMIT
        break

    trace.final_guards = guards
    trace.unused = oracle.unused
    msg = f"run {trace.status} after {len(trace.steps)} action(s)"
    if trace.reason:
        msg += f": {trace.reason}"
    logging.info(msg)
    return trace, config


def replay(
    bat: BAT,
    program: Program,
    script: NatureScript,
    settings: RunSettings | None = None,
) -> Trace:
    """Run with recorded outcomes; leftover outcomes are reported but not fatal."""
    trace, _ = run(bat, program, ScriptedOracle(script), settings)
    if trace.unused:
        msg = f"{trace.unused} unused nature outcome(s) at the end of the script"
        logging.warning(msg)
    return trace


def with_program(config: Config, program: Program) -> Config:
    return replace(config, program=program, steps=0)
