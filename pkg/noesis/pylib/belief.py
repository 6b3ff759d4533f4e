"""
Weighted possible-worlds belief states and the exact Bayesian filter.

A belief state is always normalized: weights are positive fractions summing to
exactly one, there is one entry per world, and entries are kept in canonical
world order so equal beliefs compare and hash equal.
"""

from collections import defaultdict
from collections.abc import Iterable, Iterator
from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING

from noesis.pylib.errors import InconsistentObservationError, NormalizationError
from noesis.pylib.util import rational_str
from noesis.pylib.world import World

if TYPE_CHECKING:
    from noesis.pylib.action_theory import BAT, Observation


@dataclass(frozen=True)
class BeliefState:
    entries: tuple[tuple[World, Fraction], ...]

    @classmethod
    def certain(cls, world: World) -> "BeliefState":
        return cls(((world, Fraction(1)),))

    def items(self) -> Iterator[tuple[World, Fraction]]:
        return iter(self.entries)

    def __iter__(self) -> Iterator[World]:
        return (world for world, _ in self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, world) -> bool:
        return any(w == world for w, _ in self.entries)

    def weight(self, world: World) -> Fraction:
        for w, weight in self.entries:
            if w == world:
                return weight
        return Fraction(0)

    def support(self) -> frozenset[World]:
        return frozenset(w for w, _ in self.entries)

    def total(self) -> Fraction:
        return sum((w for _, w in self.entries), start=Fraction(0))

    def is_normalized(self) -> bool:
        return self.total() == 1 and all(w > 0 for _, w in self.entries)

    def most_probable(self) -> World:
        """Heaviest world; ties go to the canonically first one."""
        best = max(w for _, w in self.entries)
        return next(world for world, w in self.entries if w == best)

    def snapshot(self) -> list[dict]:
        return [
            {"world": world.as_dict(), "weight": rational_str(weight)}
            for world, weight in self.entries
        ]

    def __str__(self) -> str:
        inner = ", ".join(f"{world}: {rational_str(w)}" for world, w in self.entries)
        return f"[{inner}]"


def normalize(raw: Iterable[tuple[World, Fraction | int]]) -> BeliefState:
    """Merge duplicate worlds, drop zero weights, and rescale to total mass one."""
    merged: dict[World, Fraction] = defaultdict(Fraction)
    for world, weight in raw:
        weight = Fraction(weight)
        if weight < 0:
            msg = f"negative weight {weight} on world {world}"
            raise NormalizationError(msg)
        merged[world] += weight

    total = sum(merged.values(), start=Fraction(0))
    if total == 0:
        msg = "cannot normalize a belief with total mass 0"
        raise NormalizationError(msg)

    entries = sorted(
        ((world, weight / total) for world, weight in merged.items() if weight > 0),
        key=lambda e: e[0].sort_key(),
    )
    return BeliefState(tuple(entries))


def update(belief: BeliefState, observation: "Observation", bat: "BAT") -> BeliefState:
    """Progress every believed world through every action the observation could be."""
    actions = bat.explanations(observation)

    raw = []
    for world, weight in belief.items():
        for action in actions:
            if not bat.poss(world, action):
                continue
            likelihood = bat.likelihood(world, action)
            if likelihood > 0:
                raw.append((bat.progress(world, action), weight * likelihood))

    if not raw:
        raise InconsistentObservationError(str(observation))
    return normalize(raw)
