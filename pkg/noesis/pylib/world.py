from collections.abc import Iterator, Mapping
from dataclasses import dataclass
from functools import cached_property

from noesis.pylib.errors import EvaluationError
from noesis.pylib.util import Value, value_key


@dataclass(frozen=True)
class World(Mapping):
    """A total assignment of values to functional fluents."""

    items_: tuple[tuple[str, Value], ...]

    @classmethod
    def of(cls, assignments: Mapping[str, Value] | None = None, **kwargs) -> "World":
        merged = dict(assignments or {}) | kwargs
        return cls(tuple(sorted(merged.items())))

    @cached_property
    def _index(self) -> dict[str, Value]:
        return dict(self.items_)

    def __getitem__(self, fluent: str) -> Value:
        try:
            return self._index[fluent]
        except KeyError:
            msg = f"world has no value for fluent {fluent}"
            raise EvaluationError(msg) from None

    def __iter__(self) -> Iterator[str]:
        return (name for name, _ in self.items_)

    def __len__(self) -> int:
        return len(self.items_)

    def __contains__(self, fluent) -> bool:
        return fluent in self._index

    def __hash__(self) -> int:
        return hash(self.items_)

    def __eq__(self, other) -> bool:
        if not isinstance(other, World):
            return NotImplemented
        return self.items_ == other.items_

    def replace(self, updates: Mapping[str, Value]) -> "World":
        if not updates:
            return self
        return World.of(self._index | dict(updates))

    def sort_key(self) -> tuple:
        return tuple(value_key(v) for _, v in self.items_)

    def as_dict(self) -> dict[str, Value]:
        return dict(self.items_)

    def __str__(self) -> str:
        inner = ", ".join(f"{k}={v}" for k, v in self.items_)
        return f"{{{inner}}}"
