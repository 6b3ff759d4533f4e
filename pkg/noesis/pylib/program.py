from dataclasses import dataclass

from noesis.pylib.logic.formula import Formula, Truth
from noesis.pylib.logic.term import Term


class Program:
    def substitute(self, mapping: dict[str, Term]) -> "Program":
        raise NotImplementedError

    def simplify(self) -> "Program":
        """Fold guards decided by constants; drop branches that cannot run."""
        return self

    def node_count(self) -> int:
        return 1

    def formulas(self) -> list[Formula]:
        return []

    def acts(self) -> list["Act"]:
        return []


@dataclass(frozen=True)
class Nil(Program):
    def substitute(self, mapping):
        return self

    def node_count(self):
        return 0


NIL = Nil()


@dataclass(frozen=True)
class Act(Program):
    name: str
    args: tuple[Term, ...] = ()

    def substitute(self, mapping):
        return Act(self.name, tuple(a.substitute(mapping) for a in self.args))

    def acts(self):
        return [self]


@dataclass(frozen=True)
class Test(Program):
    cond: Formula

    def substitute(self, mapping):
        return Test(self.cond.substitute(mapping))

    def simplify(self):
        cond = self.cond.simplify()
        if cond == Truth(True):
            return NIL
        return Test(cond)

    def formulas(self):
        return [self.cond]


@dataclass(frozen=True)
class Seq(Program):
    first: Program
    second: Program

    def substitute(self, mapping):
        return sequence(self.first.substitute(mapping), self.second.substitute(mapping))

    def simplify(self):
        return sequence(self.first.simplify(), self.second.simplify())

    def node_count(self):
        return self.first.node_count() + self.second.node_count()

    def formulas(self):
        return self.first.formulas() + self.second.formulas()

    def acts(self):
        return self.first.acts() + self.second.acts()


@dataclass(frozen=True)
class If(Program):
    cond: Formula
    then: Program
    else_: Program = NIL

    def substitute(self, mapping):
        return If(
            self.cond.substitute(mapping),
            self.then.substitute(mapping),
            self.else_.substitute(mapping),
        )

    def simplify(self):
        cond = self.cond.simplify()
        if isinstance(cond, Truth):
            return (self.then if cond.value else self.else_).simplify()
        return If(cond, self.then.simplify(), self.else_.simplify())

    def node_count(self):
        return 1 + self.then.node_count() + self.else_.node_count()

    def formulas(self):
        return [self.cond, *self.then.formulas(), *self.else_.formulas()]

    def acts(self):
        return self.then.acts() + self.else_.acts()


@dataclass(frozen=True)
class While(Program):
    cond: Formula
    body: Program

    def substitute(self, mapping):
        return While(self.cond.substitute(mapping), self.body.substitute(mapping))

    def simplify(self):
        cond = self.cond.simplify()
        if cond == Truth(False):
            return NIL
        return While(cond, self.body.simplify())

    def node_count(self):
        return 1 + self.body.node_count()

    def formulas(self):
        return [self.cond, *self.body.formulas()]

    def acts(self):
        return self.body.acts()


def statements(program: Program) -> list[Program]:
    """Flatten nested sequences into a statement list."""
    match program:
        case Nil():
            return []
        case Seq(first, second):
            return statements(first) + statements(second)
        case _:
            return [program]


def sequence(*programs: Program) -> Program:
    """Right-nested sequence of the given programs with empty parts removed."""
    flat = [s for p in programs for s in statements(p)]
    if not flat:
        return NIL
    result = flat[-1]
    for program in reversed(flat[:-1]):
        result = Seq(program, result)
    return result
