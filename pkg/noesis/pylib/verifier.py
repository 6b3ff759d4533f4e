"""
Exhaustive exploration of every nature choice a program can meet.

The explorer walks the execution tree depth first in canonical outcome order
and returns exact statistics. Subtrees are memoized: with merge="exact" two
nodes share a subtree when program, belief, actual world and action count are
all equal. With merge="support" the belief is replaced by its support, which is
exact for every statistic as long as all guards and goals only ask whether a
belief is zero or one.
"""

import logging
from collections.abc import Iterable
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction

from noesis.pylib import const
from noesis.pylib.action_theory import BAT, GroundAction
from noesis.pylib.engine import (
    Config,
    RunSettings,
    advance,
    candidates,
    check_known_poss,
    initial_config,
    instantiate,
    next_action,
)
from noesis.pylib.errors import ExecutionFailure, NoesisError
from noesis.pylib.frontend.printer import print_formula
from noesis.pylib.logic.formula import Formula, Know
from noesis.pylib.oracle import NatureScript, ScriptedOracle
from noesis.pylib.program import Program
from noesis.pylib.trace import GuardRecord

Child = tuple[GroundAction, Fraction, "Config | Subtree"]


@dataclass(frozen=True)
class ExploreSettings:
    max_actions: int = const.DEFAULT_DEPTH
    node_budget: int = const.NODE_BUDGET
    merge: str = "auto"
    jobs: int = 1
    audit: bool = False
    max_counterexamples: int = const.MAX_COUNTEREXAMPLES
    run: RunSettings = field(default_factory=RunSettings)


@dataclass(frozen=True)
class Branch:
    """A path from the root with its probability and what happened at its end."""

    path: tuple[GroundAction, ...]
    probability: Fraction
    reason: str

    def extend(self, action: GroundAction | None, probability: Fraction) -> "Branch":
        path = self.path if action is None else (action, *self.path)
        return Branch(path, probability * self.probability, self.reason)


def here(reason: str) -> Branch:
    return Branch((), Fraction(1), reason)


@dataclass
class Subtree:
    """Statistics of a subtree, relative to reaching its root with probability 1."""

    completed: Fraction = Fraction(0)
    failed: Fraction = Fraction(0)
    running: Fraction = Fraction(0)
    action_mass: Fraction = Fraction(0)  # Σ probability × actions over completed leaves
    believed: list[Fraction] = field(default_factory=list)
    actual: list[Fraction] = field(default_factory=list)
    failures: list[Branch] = field(default_factory=list)
    unfinished: list[Branch] = field(default_factory=list)
    violations: list[Branch] = field(default_factory=list)
    leaves: dict = field(default_factory=dict)  # leaf key -> [config, mass]

    def absorb(
        self,
        child: "Subtree",
        action: GroundAction | None,
        probability: Fraction,
        cap: int,
    ) -> None:
        self.completed += probability * child.completed
        self.failed += probability * child.failed
        self.running += probability * child.running
        self.action_mass += probability * child.action_mass
        for i, mass in enumerate(child.believed):
            self.believed[i] += probability * mass
        for i, mass in enumerate(child.actual):
            self.actual[i] += probability * mass
        for mine, theirs in (
            (self.failures, child.failures),
            (self.unfinished, child.unfinished),
            (self.violations, child.violations),
        ):
            room = max(cap - len(mine), 0)
            mine.extend(b.extend(action, probability) for b in theirs[:room])
        for key, (config, mass) in child.leaves.items():
            if key in self.leaves:
                self.leaves[key][1] += probability * mass
            else:
                self.leaves[key] = [config, probability * mass]


@dataclass
class GoalRow:
    goal: str
    believed: Fraction
    actual: Fraction | None  # Only for objective goals


@dataclass
class ExplorationStats:
    completed: Fraction
    failed: Fraction
    running: Fraction
    expected_actions: Fraction | None
    goals: list[GoalRow]
    counterexamples: list[Branch]
    unfinished: list[Branch]
    nodes: int
    merge: str
    max_actions: int
    incomplete: bool = False

    @property
    def total(self) -> Fraction:
        return self.completed + self.failed + self.running


@dataclass
class AuditReport:
    violations: list[Branch]
    nodes: int
    max_actions: int
    merge: str
    incomplete: bool = False

    @property
    def ok(self) -> bool:
        return not self.violations


def support_valid(program: Program, goals: Iterable[Formula]) -> bool:
    return all(f.is_support_determined() for f in [*program.formulas(), *goals])


def pick_merge(mode: str, program: Program, goals: list[Formula]) -> str:
    if mode not in const.MERGE_MODES:
        msg = f"unknown merge mode {mode}"
        raise ValueError(msg)
    if mode == "auto":
        return "support" if support_valid(program, goals) else "exact"
    return mode


class Explorer:
    def __init__(
        self,
        bat: BAT,
        goals: list[Formula] | None = None,
        settings: ExploreSettings | None = None,
        nature: BAT | None = None,
        merge: str = "exact",
        *,
        collect_leaves: bool = False,
        strict_goal: bool = False,
    ):
        self.bat = bat
        self.nature = nature or bat
        self.goals = list(goals or [])
        self.settings = settings or ExploreSettings()
        self.merge = merge
        self.collect_leaves = collect_leaves
        self.strict_goal = strict_goal
        self.memo: dict = {}
        self.nodes = 0
        self.incomplete = False

    @property
    def cap(self) -> int:
        return self.settings.max_counterexamples

    def belief_key(self, config: Config):
        return config.belief.support() if self.merge == "support" else config.belief

    def empty(self) -> Subtree:
        n = len(self.goals)
        return Subtree(believed=[Fraction(0)] * n, actual=[Fraction(0)] * n)

    def failure(self, reason: str, *, violation: bool = False) -> Subtree:
        sub = self.empty()
        sub.failed = Fraction(1)
        sub.failures.append(here(reason))
        if violation and self.settings.audit:
            sub.violations.append(here(reason))
        return sub

    def visit(self, config: Config) -> Subtree:
        if self.merge == "none":
            return self.expand(config)
        key = (config.program, self.belief_key(config), config.actual, config.steps)
        if key in self.memo:
            return self.memo[key]
        result = self.expand(config)
        if not self.incomplete:
            self.memo[key] = result
        return result

    def expand(self, config: Config) -> Subtree:
        sub, children = self.branch(config)
        for action, probability, child in children:
            if isinstance(child, Config):
                child = self.visit(child)
            sub.absorb(child, action, probability, self.cap)
        return sub

    def branch(self, config: Config) -> tuple[Subtree, list[Child]]:
        """Work done at one node: budget, audit, silent steps, and nature's options."""
        self.nodes += 1
        if self.nodes > self.settings.node_budget:
            if not self.incomplete:
                msg = f"node budget of {self.settings.node_budget} exhausted"
                logging.warning(msg)
            self.incomplete = True
            sub = self.empty()
            sub.running = Fraction(1)
            return sub, []

        sub = self.empty()
        if self.settings.audit:
            self.audit_node(config, sub)

        guards: list[GuardRecord] = []
        try:
            head = next_action(config, self.settings.run, guards)
        except NoesisError as err:
            self.audit_guards(config, guards, sub)
            reason = err.reason if isinstance(err, ExecutionFailure) else str(err)
            return self.merge_into(sub, self.failure(reason)), []
        self.audit_guards(config, guards, sub)

        if head is None:
            self.complete(config, sub)
            return sub, []
        if config.steps >= self.settings.max_actions:
            sub.running = Fraction(1)
            sub.unfinished.append(here("action bound reached"))
            return sub, []

        act, rest = head
        try:
            issued = instantiate(act, self.bat)
            if self.settings.run.strict_poss:
                check_known_poss(config, issued, self.bat)
            options = candidates(config, issued, self.nature)
        except NoesisError as err:
            reason = err.reason if isinstance(err, ExecutionFailure) else str(err)
            return self.merge_into(sub, self.failure(reason)), []

        children: list[Child] = []
        for action, probability in options:
            try:
                child = advance(config, action, rest, self.bat, self.nature)
            except ExecutionFailure as err:
                child = self.failure(err.reason, violation=True)
            except NoesisError as err:
                child = self.failure(str(err))
            children.append((action, probability, child))
        return sub, children

    def merge_into(self, sub: Subtree, other: Subtree) -> Subtree:
        sub.absorb(other, None, Fraction(1), self.cap)
        return sub

    def complete(self, config: Config, sub: Subtree) -> None:
        sub.completed = Fraction(1)
        sub.action_mass = Fraction(config.steps)
        for i, goal in enumerate(self.goals):
            if goal.is_objective():
                sub.believed[i] = Fraction(int(Know(goal).believed(config.belief, {})))
                sub.actual[i] = Fraction(int(goal.holds(config.actual, {})))
            else:
                sub.believed[i] = Fraction(int(goal.believed(config.belief, {})))
        if self.strict_goal and self.goals and not sub.believed[0]:
            sub.violations.append(here("completed without the expected knowledge"))
        if self.collect_leaves:
            sub.leaves[(self.belief_key(config), config.actual)] = [config, Fraction(1)]

    def audit_node(self, config: Config, sub: Subtree) -> None:
        if not config.belief.is_normalized():
            sub.violations.append(here("belief not normalized"))
        if config.belief.weight(config.actual) <= 0:
            sub.violations.append(here("actual world outside the belief support"))

    def audit_guards(self, config: Config, guards: list[GuardRecord], sub) -> None:
        if not self.settings.audit:
            return
        for record in guards:
            for body in record.known:
                if not body.holds(config.actual, {}):
                    reason = (
                        f"known {print_formula(body)} is false "
                        f"in the actual world {config.actual}"
                    )
                    sub.violations.append(here(reason))

    def roots(self, program: Program) -> list[tuple[Config, Fraction]]:
        belief = self.bat.initial_belief
        if self.bat.actual is not None:
            return [(Config(program, belief, self.bat.actual), Fraction(1))]
        return [
            (Config(program, belief, world), weight) for world, weight in belief.items()
        ]


def _explore_subtree(args) -> tuple[Subtree, int, bool]:
    bat, nature, goals, settings, merge, collect, config = args
    explorer = Explorer(bat, goals, settings, nature, merge, collect_leaves=collect)
    sub = explorer.visit(config)
    return sub, explorer.nodes, explorer.incomplete


def explore_from(
    explorer: Explorer,
    roots: list[tuple[Config, Fraction]],
) -> Subtree:
    """Explore weighted roots, fanning out over first-level branches when jobs > 1."""
    total = explorer.empty()
    jobs = explorer.settings.jobs
    for config, weight in roots:
        if jobs <= 1:
            total.absorb(explorer.visit(config), None, weight, explorer.cap)
            continue

        sub, children = explorer.branch(config)
        work = [
            (
                explorer.bat,
                explorer.nature,
                explorer.goals,
                explorer.settings,
                explorer.merge,
                explorer.collect_leaves,
                child,
            )
            for _, _, child in children
            if isinstance(child, Config)
        ]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = iter(list(pool.map(_explore_subtree, work)))
        for action, probability, child in children:
            if isinstance(child, Config):
                child, nodes, partial = next(results)
                explorer.nodes += nodes
                explorer.incomplete |= partial
            sub.absorb(child, action, probability, explorer.cap)
        total.absorb(sub, None, weight, explorer.cap)
    return total


def explore(
    bat: BAT,
    program: Program,
    max_actions: int,
    goals: list[Formula] | None = None,
    settings: ExploreSettings | None = None,
    nature: BAT | None = None,
) -> ExplorationStats:
    goals = list(goals or [])
    settings = replace(settings or ExploreSettings(), max_actions=max_actions)
    merge = pick_merge(settings.merge, program, goals)
    explorer = Explorer(bat, goals, settings, nature, merge)
    tree = explore_from(explorer, explorer.roots(program))

    expected = tree.action_mass / tree.completed if tree.completed else None
    rows = [
        GoalRow(
            print_formula(goal),
            tree.believed[i],
            tree.actual[i] if goal.is_objective() else None,
        )
        for i, goal in enumerate(goals)
    ]
    msg = f"explored {explorer.nodes} node(s), merge={merge}"
    logging.info(msg)
    return ExplorationStats(
        completed=tree.completed,
        failed=tree.failed,
        running=tree.running,
        expected_actions=expected,
        goals=rows,
        counterexamples=tree.failures,
        unfinished=tree.unfinished,
        nodes=explorer.nodes,
        merge=merge,
        max_actions=max_actions,
        incomplete=explorer.incomplete,
    )


def audit(
    bat: BAT,
    program: Program,
    max_actions: int,
    settings: ExploreSettings | None = None,
    nature: BAT | None = None,
) -> AuditReport:
    """Walk the same tree as explore and collect every invariant violation."""
    settings = replace(settings or ExploreSettings(), max_actions=max_actions, audit=True)
    merge = pick_merge(settings.merge, program, [])
    explorer = Explorer(bat, [], settings, nature, merge)
    tree = explore_from(explorer, explorer.roots(program))
    for violation in tree.violations[:1]:
        path = ", ".join(str(a) for a in violation.path)
        msg = f"first audit violation: {violation.reason} after ⟨{path}⟩"
        logging.info(msg)
    return AuditReport(
        violations=tree.violations,
        nodes=explorer.nodes,
        max_actions=max_actions,
        merge=merge,
        incomplete=explorer.incomplete,
    )


def path_probability(
    bat: BAT,
    program: Program,
    script: NatureScript,
    settings: RunSettings | None = None,
) -> Fraction:
    """Probability that nature makes exactly the scripted choices, as far as they go."""
    settings = settings or RunSettings()
    oracle = ScriptedOracle(script)
    config = initial_config(bat, program, oracle)
    probability = Fraction(1)
    while config.steps < settings.max_steps:
        head = next_action(config, settings, [])
        if head is None:
            break
        act, rest = head
        issued = instantiate(act, bat)
        options = candidates(config, issued, bat)
        needs_outcome = any(a.outcome_args for a, _ in options)
        if needs_outcome and not oracle.unused:
            break
        action = oracle.choose(issued, options)
        probability *= next(p for a, p in options if a == action)
        config = advance(config, action, rest, bat)
    return probability
