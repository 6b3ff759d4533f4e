from dataclasses import dataclass
from functools import cached_property

from noesis.pylib.errors import OutOfCarrierError, SortMismatchError
from noesis.pylib.util import Value


@dataclass(frozen=True)
class Sort:
    """A finite object domain: an integer interval or an enumeration of constants."""

    name: str
    lo: int | None = None
    hi: int | None = None
    constants: tuple[str, ...] = ()

    def __post_init__(self):
        if self.constants:
            if self.lo is not None or self.hi is not None:
                msg = f"sort {self.name} cannot be both an interval and an enumeration"
                raise SortMismatchError(msg)
            if len(set(self.constants)) != len(self.constants):
                msg = f"sort {self.name} repeats a constant"
                raise SortMismatchError(msg)
        elif self.lo is None or self.hi is None or self.lo > self.hi:
            msg = f"sort {self.name} has an empty carrier"
            raise SortMismatchError(msg)

    @classmethod
    def interval(cls, name: str, lo: int, hi: int) -> "Sort":
        return cls(name=name, lo=lo, hi=hi)

    @classmethod
    def enumeration(cls, name: str, constants) -> "Sort":
        return cls(name=name, constants=tuple(constants))

    @property
    def is_integer(self) -> bool:
        return not self.constants

    @cached_property
    def carrier(self) -> tuple[Value, ...]:
        if self.constants:
            return self.constants
        return tuple(range(self.lo, self.hi + 1))

    def contains(self, value) -> bool:
        if self.constants:
            return isinstance(value, str) and value in self.constants
        return (
            isinstance(value, int)
            and not isinstance(value, bool)
            and self.lo <= value <= self.hi
        )

    def check(self, what: str, value) -> Value:
        if not self.contains(value):
            raise OutOfCarrierError(what, value, self.name)
        return value

    def __len__(self) -> int:
        return len(self.carrier)
