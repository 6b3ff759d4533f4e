"""
Refinement mappings from a high-level action theory onto a low-level one.

Each high-level fluent value maps to a low-level objective formula and each
high-level action maps to a low-level program. Programs translate by
structural recursion. `check_refinement` compares the two levels empirically:
from every low-level state reached so far it runs the mapped action to
exhaustion (up to a depth bound) and asks whether the agent ends up knowing
what the high-level model predicts.
"""

import itertools
import logging
from dataclasses import dataclass, field, replace
from fractions import Fraction

from tqdm import tqdm

from noesis.pylib import const
from noesis.pylib.action_theory import BAT, IssuedAction, observation_of
from noesis.pylib.belief import BeliefState, update
from noesis.pylib.engine import Config
from noesis.pylib.errors import NoesisError, UnmappedSymbolError
from noesis.pylib.frontend.printer import print_formula
from noesis.pylib.logic.formula import (
    FALSE,
    TRUE,
    And,
    Bel,
    Compare,
    Cond,
    Exists,
    Forall,
    Formula,
    Know,
    Not,
    Or,
    Truth,
    constant,
    degree_of_belief,
    join,
)
from noesis.pylib.logic.term import Abs, BinOp, FluentRef, Neg, Term, Var
from noesis.pylib.program import NIL, Act, If, Nil, Program, Seq, Test, While, sequence
from noesis.pylib.util import Value
from noesis.pylib.verifier import Branch, Explorer, ExploreSettings, here, pick_merge


@dataclass(frozen=True)
class FluentMapping:
    fluent: str
    var: Var  # Stands for the high-level value
    cases: tuple[tuple[Value, Formula], ...] = ()
    template: Formula | None = None

    def instantiate(self, value: Value) -> Formula:
        if self.template is not None:
            bound = {self.var.name: constant(value, self.var.sort)}
            return self.template.substitute(bound).simplify()
        for case, formula in self.cases:
            if case == value:
                return formula
        msg = f"no case for {self.fluent} = {value}"
        raise UnmappedSymbolError(msg)


@dataclass(frozen=True)
class ActionMapping:
    action: str
    params: tuple[Var, ...]
    body: Program


@dataclass(frozen=True)
class RefinementMapping:
    fluents: dict[str, FluentMapping]
    actions: dict[str, ActionMapping]
    spans: dict = field(default_factory=dict, compare=False, repr=False)


def bind_fluents(term: Term, values: dict[str, Value]) -> Term:
    """Replace high-level fluent references by the given values."""
    match term:
        case FluentRef(name, sort) if name in values:
            return constant(values[name], sort)
        case BinOp(op, left, right):
            return BinOp(op, bind_fluents(left, values), bind_fluents(right, values))
        case Neg(operand):
            return Neg(bind_fluents(operand, values))
        case Abs(operand):
            return Abs(bind_fluents(operand, values))
        case Cond():
            msg = "cond expressions cannot be mapped"
            raise UnmappedSymbolError(msg)
        case _:
            return term


def fluent_refs(term: Term) -> dict[str, FluentRef]:
    match term:
        case FluentRef(name):
            return {name: term}
        case BinOp(_, left, right):
            return fluent_refs(left) | fluent_refs(right)
        case Neg(operand) | Abs(operand):
            return fluent_refs(operand)
        case _:
            return {}


def map_atom(mapping: RefinementMapping, atom: Compare) -> Formula:
    """Expand a comparison over the values of the high-level fluents it mentions."""
    refs = fluent_refs(atom.left) | fluent_refs(atom.right)
    if not refs:
        return atom.simplify()
    names = sorted(refs)
    for name in names:
        if name not in mapping.fluents:
            msg = f"unmapped fluent {name}"
            raise UnmappedSymbolError(msg)

    disjuncts = []
    for combo in itertools.product(*(refs[n].sort.carrier for n in names)):
        values = dict(zip(names, combo, strict=True))
        decided = Compare(
            atom.op,
            bind_fluents(atom.left, values),
            bind_fluents(atom.right, values),
        ).simplify()
        if decided == FALSE:
            continue
        parts = [mapping.fluents[n].instantiate(v) for n, v in values.items()]
        if decided != TRUE:
            parts.append(decided)
        disjuncts.append(join(And, parts))
    return join(Or, disjuncts)


def _map(mapping: RefinementMapping, phi: Formula) -> Formula:
    match phi:
        case Truth():
            return phi
        case Compare():
            return map_atom(mapping, phi)
        case Not(body):
            return Not(_map(mapping, body))
        case And(parts):
            return And(tuple(_map(mapping, p) for p in parts))
        case Or(parts):
            return Or(tuple(_map(mapping, p) for p in parts))
        case Exists(var, body) | Forall(var, body):
            kind = Or if isinstance(phi, Exists) else And
            instances = [
                _map(mapping, body.substitute({var.name: constant(v, var.sort)}))
                for v in var.sort.carrier
            ]
            return join(kind, instances)
        case Know(body):
            return Know(_map(mapping, body))
        case Bel(body, op, bound):
            return Bel(_map(mapping, body), op, bound)
    msg = f"cannot map {phi!r}"
    raise UnmappedSymbolError(msg)


def map_formula(mapping: RefinementMapping, phi: Formula) -> Formula:
    return _map(mapping, phi).simplify()


def map_action(mapping: RefinementMapping, action: IssuedAction) -> Program:
    if action.name not in mapping.actions:
        msg = f"unmapped action {action.name}"
        raise UnmappedSymbolError(msg)
    entry = mapping.actions[action.name]
    if len(entry.params) != len(action.agent_args):
        msg = f"{action.name} maps {len(entry.params)} parameter(s), got {action}"
        raise UnmappedSymbolError(msg)
    bound = {
        var.name: constant(value, var.sort)
        for var, value in zip(entry.params, action.agent_args, strict=True)
    }
    return entry.body.substitute(bound).simplify()


def translate(mapping: RefinementMapping, program: Program) -> Program:
    match program:
        case Nil():
            return NIL
        case Act(name, args):
            if not all(a.is_ground() for a in args):
                msg = f"arguments of {name} must be constants to translate"
                raise UnmappedSymbolError(msg)
            values = tuple(a.evaluate(None, {}) for a in args)
            return map_action(mapping, IssuedAction(name, values))
        case Test(cond):
            return Test(map_formula(mapping, cond))
        case Seq(first, second):
            return sequence(translate(mapping, first), translate(mapping, second))
        case If(cond, then, else_):
            return If(
                map_formula(mapping, cond),
                translate(mapping, then),
                translate(mapping, else_),
            )
        case While(cond, body):
            return While(map_formula(mapping, cond), translate(mapping, body))
    msg = f"cannot translate {program!r}"
    raise UnmappedSymbolError(msg)


# ----------------------------------------------------------------------------
# Bounded refinement checking


@dataclass
class AtomCheck:
    fluent: str
    value: Value
    expected: bool | None  # Known true / known false at the high level, or undecided
    formula: str
    degree: Fraction
    ok: bool


@dataclass
class ActionCheck:
    sequence: tuple[str, ...]
    starts: int
    termination: Fraction
    agreement: Fraction
    actual_disagreement: Fraction
    min_termination: Fraction
    counterexample: Branch | None
    ok: bool


@dataclass
class RefinementReport:
    initial: list[AtomCheck]
    actions: list[ActionCheck]
    depth: int
    hl_horizon: int
    epsilon: Fraction
    incomplete: bool = False

    @property
    def initial_ok(self) -> bool:
        return all(a.ok for a in self.initial)

    @property
    def ok(self) -> bool:
        return self.initial_ok and all(a.ok for a in self.actions)


@dataclass
class Frontier:
    prefix: tuple[str, ...]
    hl_belief: BeliefState
    starts: list[tuple[Config, Fraction]]


def fluent_atom(bat: BAT, fluent: str, value: Value) -> Compare:
    sort = bat.fluents[fluent]
    return Compare("=", FluentRef(fluent, sort), constant(value, sort))


def known_atoms(bat: BAT, belief: BeliefState) -> list[tuple[str, Value, bool | None]]:
    atoms = []
    for fluent, sort in bat.fluents.items():
        for value in sort.carrier:
            degree = degree_of_belief(fluent_atom(bat, fluent, value), belief)
            expected = True if degree == 1 else False if degree == 0 else None
            atoms.append((fluent, value, expected))
    return atoms


def agreement_goal(bat: BAT, mapping: RefinementMapping, belief: BeliefState) -> Formula:
    """Low-level knowledge matching exactly what the high-level belief knows."""
    parts = []
    for fluent, value, expected in known_atoms(bat, belief):
        mapped = map_formula(mapping, fluent_atom(bat, fluent, value))
        if expected is True:
            parts.append(Know(mapped))
        elif expected is False:
            parts.append(Know(Not(mapped)))
    return join(And, parts)


def actual_agrees(
    bat: BAT, mapping: RefinementMapping, belief: BeliefState, config: Config
) -> bool:
    for fluent, value, expected in known_atoms(bat, belief):
        if expected is None:
            continue
        mapped = map_formula(mapping, fluent_atom(bat, fluent, value))
        if mapped.holds(config.actual, {}) != expected:
            return False
    return True


def check_initial(hl: BAT, ll: BAT, mapping: RefinementMapping) -> list[AtomCheck]:
    checks = []
    for fluent, value, expected in known_atoms(hl, hl.initial_belief):
        mapped = map_formula(mapping, fluent_atom(hl, fluent, value))
        degree = degree_of_belief(mapped, ll.initial_belief)
        ok = expected is None or degree == (1 if expected else 0)
        checks.append(
            AtomCheck(fluent, value, expected, print_formula(mapped), degree, ok)
        )
        if not ok:
            msg = (
                f"initial correspondence fails for {fluent} = {value}: "
                f"low-level degree {degree}"
            )
            logging.info(msg)
    return checks


def known_possible(bat: BAT, belief: BeliefState, issued: IssuedAction) -> bool:
    outcomes = bat.outcomes(issued)
    return all(any(bat.poss(w, a) for a in outcomes) for w in belief)


def hl_successors(bat: BAT, belief: BeliefState, issued: IssuedAction) -> list[BeliefState]:
    observations = []
    for world in belief:
        for action in bat.outcomes(issued):
            if bat.poss(world, action) and bat.likelihood(world, action) > 0:
                obs = observation_of(action)
                if obs not in observations:
                    observations.append(obs)
    return [update(belief, obs, bat) for obs in observations]


def refinement_merge(hl: BAT, mapping: RefinementMapping, goals: list[Formula]) -> str:
    programs = [map_action(mapping, issued) for issued in hl.issued_actions()]
    modes = {pick_merge("auto", p, goals) for p in programs}
    return "support" if modes == {"support"} else "exact"


def broken_check(node: Frontier, issued: IssuedAction, reason: str) -> ActionCheck:
    zero = Fraction(0)
    return ActionCheck(
        sequence=(*node.prefix, str(issued)),
        starts=len(node.starts),
        termination=zero,
        agreement=zero,
        actual_disagreement=zero,
        min_termination=zero,
        counterexample=here(reason),
        ok=False,
    )


def check_refinement(
    hl: BAT,
    ll: BAT,
    mapping: RefinementMapping,
    depth: int = const.DEFAULT_DEPTH,
    hl_horizon: int = const.DEFAULT_HL_HORIZON,
    epsilon: Fraction = const.DEFAULT_EPSILON,
    settings: ExploreSettings | None = None,
    *,
    progress: bool = False,
) -> RefinementReport:
    settings = replace(settings or ExploreSettings(), max_actions=depth, jobs=1)
    initial = check_initial(hl, ll, mapping)
    report = RefinementReport(initial, [], depth, hl_horizon, epsilon)

    root = Explorer(ll)
    frontier = [Frontier((), hl.initial_belief, root.roots(NIL))]

    for level in range(hl_horizon):
        following = []
        for node in tqdm(frontier, desc=f"hl action {level + 1}", disable=not progress):
            for issued in hl.issued_actions():
                if not known_possible(hl, node.hl_belief, issued):
                    continue
                try:
                    check, nexts, partial = check_action(
                        hl, ll, mapping, node, issued, settings, epsilon
                    )
                except NoesisError as err:
                    msg = f"{issued} after {node.prefix}: {err}"
                    logging.info(msg)
                    check = broken_check(node, issued, str(err))
                    nexts, partial = [], False
                report.actions.append(check)
                report.incomplete |= partial
                following.extend(nexts)
        frontier = following

    msg = f"refinement check {'passed' if report.ok else 'failed'}"
    logging.info(msg)
    return report


def check_action(
    hl: BAT,
    ll: BAT,
    mapping: RefinementMapping,
    node: Frontier,
    issued: IssuedAction,
    settings: ExploreSettings,
    epsilon: Fraction,
) -> tuple[ActionCheck, list[Frontier], bool]:
    successors = hl_successors(hl, node.hl_belief, issued)
    goals = [agreement_goal(hl, mapping, b) for b in successors]
    goals = [join(Or, goals), *goals]
    program = map_action(mapping, issued)
    merge = settings.merge
    if merge == "auto":
        merge = refinement_merge(hl, mapping, goals)

    explorer = Explorer(
        ll, goals, settings, merge=merge, collect_leaves=True, strict_goal=True
    )
    total = explorer.empty()
    mass = sum((w for _, w in node.starts), start=Fraction(0))
    min_termination = Fraction(1)
    for start, weight in node.starts:
        sub = explorer.visit(Config(program, start.belief, start.actual))
        min_termination = min(min_termination, sub.completed)
        total.absorb(sub, None, weight / mass, explorer.cap)

    sequence_ = (*node.prefix, str(issued))
    per_successor: list[list[tuple[Config, Fraction]]] = [[] for _ in successors]
    actual_disagreement = Fraction(0)
    for config, weight in total.leaves.values():
        for i, goal in enumerate(goals[1:]):
            if goal.believed(config.belief, {}):
                per_successor[i].append((config, weight))
                if not actual_agrees(hl, mapping, successors[i], config):
                    actual_disagreement += weight
                break

    termination, agreement = total.completed, total.believed[0]
    ok = termination >= 1 - epsilon and agreement == termination
    counterexample = None
    if total.violations:
        counterexample = total.violations[0]
    elif not ok:
        pool = total.failures + total.unfinished
        counterexample = pool[0] if pool else None

    check = ActionCheck(
        sequence=sequence_,
        starts=len(node.starts),
        termination=termination,
        agreement=agreement,
        actual_disagreement=actual_disagreement,
        min_termination=min_termination,
        counterexample=counterexample,
        ok=ok,
    )
    nexts = [
        Frontier(sequence_, belief, starts)
        for belief, starts in zip(successors, per_successor, strict=True)
        if starts
    ]
    return check, nexts, explorer.incomplete
