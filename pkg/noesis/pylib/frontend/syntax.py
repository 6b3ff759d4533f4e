"""
Raw syntax trees produced by the grammar, before symbols are resolved.

Every node remembers the offset where it starts so the resolver can point
diagnostics at the right place.
"""

from dataclasses import dataclass, field
from fractions import Fraction


@dataclass(frozen=True)
class Node:
    loc: int = field(default=0, kw_only=True, compare=False)


# ----------------------------------------------------------------------------
# Terms


@dataclass(frozen=True)
class Name(Node):
    text: str


@dataclass(frozen=True)
class Num(Node):
    value: int


@dataclass(frozen=True)
class Ratio(Node):
    value: Fraction


@dataclass(frozen=True)
class Unary(Node):
    operand: Node


@dataclass(frozen=True)
class Binary(Node):
    op: str
    left: Node
    right: Node


@dataclass(frozen=True)
class AbsCall(Node):
    operand: Node


@dataclass(frozen=True)
class CondTerm(Node):
    cases: tuple[tuple[Node, Node], ...]
    default: Node


# ----------------------------------------------------------------------------
# Formulas


@dataclass(frozen=True)
class BoolLit(Node):
    value: bool


@dataclass(frozen=True)
class Cmp(Node):
    op: str
    left: Node
    right: Node


@dataclass(frozen=True)
class Sugar(Node):
    """Relational shorthand F(t) for F = t."""

    fluent: Name
    arg: Node


@dataclass(frozen=True)
class NotF(Node):
    body: Node


@dataclass(frozen=True)
class AndF(Node):
    parts: tuple[Node, ...]


@dataclass(frozen=True)
class OrF(Node):
    parts: tuple[Node, ...]


@dataclass(frozen=True)
class Quant(Node):
    kind: str  # "exists" or "forall"
    var: Name
    sort: Name
    body: Node


@dataclass(frozen=True)
class KnowF(Node):
    body: Node


@dataclass(frozen=True)
class BelF(Node):
    body: Node
    op: str
    bound: Node


# ----------------------------------------------------------------------------
# Program statements


@dataclass(frozen=True)
class ActStmt(Node):
    name: Name
    args: tuple[Node, ...]


@dataclass(frozen=True)
class TestStmt(Node):
    cond: Node


@dataclass(frozen=True)
class IfStmt(Node):
    cond: Node
    then: tuple[Node, ...]
    else_: tuple[Node, ...] = ()


@dataclass(frozen=True)
class WhileStmt(Node):
    cond: Node
    body: tuple[Node, ...]


# ----------------------------------------------------------------------------
# Action theory declarations


@dataclass(frozen=True)
class TheoryDecl(Node):
    name: Name


@dataclass(frozen=True)
class SortDecl(Node):
    name: Name
    lo: Node | None = None
    hi: Node | None = None
    constants: tuple[Name, ...] = ()


@dataclass(frozen=True)
class FluentDecl(Node):
    name: Name
    sort: Name


@dataclass(frozen=True)
class Range(Node):
    lo: Node
    hi: Node


@dataclass(frozen=True)
class ParamDecl(Node):
    kind: str
    name: Name
    sort: Name
    domain: tuple[Node, ...] = ()


@dataclass(frozen=True)
class Clause(Node):
    kind: str  # poss, likelihood or effects
    value: object


@dataclass(frozen=True)
class Assign(Node):
    fluent: Name
    value: Node


@dataclass(frozen=True)
class ActionDecl(Node):
    name: Name
    params: tuple[ParamDecl, ...]
    clauses: tuple[Clause, ...]


@dataclass(frozen=True)
class ActualDecl(Node):
    assigns: tuple[Assign, ...]


@dataclass(frozen=True)
class WorldDecl(Node):
    weight: Node
    assigns: tuple[Assign, ...]


@dataclass(frozen=True)
class BeliefDecl(Node):
    worlds: tuple[WorldDecl, ...]


# ----------------------------------------------------------------------------
# Refinement mappings


@dataclass(frozen=True)
class CaseArm(Node):
    value: Node
    body: Node


@dataclass(frozen=True)
class FluentEntry(Node):
    fluent: Name
    var: Name
    case_var: Name | None = None
    arms: tuple[CaseArm, ...] = ()
    template: Node | None = None


@dataclass(frozen=True)
class ActionEntry(Node):
    action: Name
    params: tuple[Name, ...]
    body: tuple[Node, ...]
