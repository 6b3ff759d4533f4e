"""
Nature oracles: who decides the outcome of a noisy action during an online run.

The seeded oracle draws 64-bit words from numpy's PCG64 and applies an exact
inverse CDF over the canonically ordered candidates, so a seed gives the same
trace on every platform. The scripted oracle replays recorded outcomes.
"""

from collections.abc import Iterable
from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING

import numpy as np

from noesis.pylib.errors import ExecutionFailure
from noesis.pylib.util import Value

if TYPE_CHECKING:
    from noesis.pylib.action_theory import BAT, GroundAction, IssuedAction
    from noesis.pylib.belief import BeliefState
    from noesis.pylib.world import World

WORD = 2**64


@dataclass(frozen=True)
class NatureScript:
    entries: tuple[tuple[Value, ...], ...] = ()
    actual: tuple[tuple[str, Value], ...] = ()  # Optional pinned initial world


class NatureOracle:
    def initial_world(self, belief: "BeliefState", bat: "BAT") -> "World":
        raise NotImplementedError

    def choose(
        self, issued: "IssuedAction", candidates: list[tuple["GroundAction", Fraction]]
    ) -> "GroundAction":
        raise NotImplementedError

    def describe(self) -> dict:
        raise NotImplementedError

    @property
    def unused(self) -> int:
        return 0


class SeededOracle(NatureOracle):
    def __init__(self, seed: int):
        self.seed = seed
        self.bits = np.random.PCG64(seed)

    def uniform(self) -> Fraction:
        return Fraction(int(self.bits.random_raw()), WORD)

    def pick(self, weighted: Iterable[tuple[object, Fraction]]):
        u = self.uniform()
        weighted = list(weighted)
        cumulative = Fraction(0)
        for item, weight in weighted:
            cumulative += weight
            if u < cumulative:
                return item
        return weighted[-1][0]

    def initial_world(self, belief, bat):
        if bat.actual is not None:
            return bat.actual
        return self.pick(belief.items())

    def choose(self, issued, candidates):
        if len(candidates) == 1:
            return candidates[0][0]
        return self.pick(candidates)

    def describe(self):
        return {"seed": self.seed}


class ScriptedOracle(NatureOracle):
    def __init__(self, script: NatureScript):
        self.script = script
        self.position = 0

    def initial_world(self, belief, bat):
        if self.script.actual:
            return bat.world(self.script.actual)
        if bat.actual is not None:
            return bat.actual
        return belief.most_probable()

    def choose(self, issued, candidates):
        if all(not action.outcome_args for action, _ in candidates):
            return candidates[0][0]

        if self.position >= len(self.script.entries):
            raise ExecutionFailure("script underrun")
        entry = self.script.entries[self.position]
        self.position += 1

        for action, _ in candidates:
            if action.outcome_args == entry:
                return action
        raise ExecutionFailure("script mismatch")

    @property
    def unused(self) -> int:
        return len(self.script.entries) - self.position

    def describe(self):
        return {"script": [e[0] if len(e) == 1 else list(e) for e in self.script.entries]}
