"""
Turn raw syntax into terms, formulas and programs bound to an action theory.

Names are looked up innermost first: quantified and template variables, then
fluents, then named constants.
"""

from dataclasses import dataclass, field
from fractions import Fraction

from noesis.pylib.errors import NoesisError
from noesis.pylib.frontend import syntax as s
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
)
from noesis.pylib.logic.sort import Sort
from noesis.pylib.logic.term import (
    Abs,
    BinOp,
    Const,
    FluentRef,
    Neg,
    Term,
    Var,
    compatible,
)
from noesis.pylib.program import NIL, Act, If, Program, Test, While, sequence


class ResolveError(Exception):
    def __init__(self, message: str, loc: int, length: int = 1):
        super().__init__(message)
        self.message = message
        self.loc = loc
        self.length = length


def fail(message: str, node: s.Node, length: int = 1):
    if isinstance(node, s.Name):
        length = len(node.text)
    return ResolveError(message, node.loc, length)


@dataclass
class Scope:
    sorts: dict[str, Sort] = field(default_factory=dict)
    fluents: dict[str, Sort] = field(default_factory=dict)
    constants: dict[str, Sort] = field(default_factory=dict)
    actions: dict = field(default_factory=dict)  # name -> ActionSchema
    variables: dict[str, Sort] = field(default_factory=dict)
    foreign: frozenset[str] = frozenset()  # Symbols that must not appear here
    foreign_message: str = ""

    def inner(self, **variables: Sort) -> "Scope":
        return Scope(
            self.sorts,
            self.fluents,
            self.constants,
            self.actions,
            self.variables | variables,
            self.foreign,
            self.foreign_message,
        )


def scope_of(bat) -> Scope:
    constants = {c: sort for sort in bat.sorts.values() for c in sort.constants}
    return Scope(dict(bat.sorts), dict(bat.fluents), constants, dict(bat.actions))


class Resolver:
    def __init__(self, scope: Scope):
        self.scope = scope

    # ------------------------------------------------------------------------
    # Terms

    def sort(self, name: s.Name, scope: Scope | None = None) -> Sort:
        scope = scope or self.scope
        if name.text not in scope.sorts:
            raise fail(f"unknown sort {name.text}", name)
        return scope.sorts[name.text]

    def name(self, node: s.Name, scope: Scope) -> Term:
        text = node.text
        if text in scope.variables:
            return Var(text, scope.variables[text])
        if text in scope.foreign:
            raise fail(scope.foreign_message, node)
        if text in scope.fluents:
            return FluentRef(text, scope.fluents[text])
        if text in scope.constants:
            return Const(text, scope.constants[text])
        raise fail(f"unknown symbol {text}", node)

    def term(self, node: s.Node, scope: Scope | None = None) -> Term:
        scope = scope or self.scope
        try:
            return self._term(node, scope)
        except NoesisError as err:
            raise fail(str(err), node) from err

    def _term(self, node: s.Node, scope: Scope) -> Term:
        match node:
            case s.Num(value):
                return Const(value)
            case s.Ratio(value):
                return Const(value)
            case s.Name():
                return self.name(node, scope)
            case s.Unary(s.Num(value) | s.Ratio(value)):
                return Const(-value)
            case s.Unary(operand):
                return Neg(self.term(operand, scope))
            case s.Binary(op, left, right):
                term = BinOp(op, self.term(left, scope), self.term(right, scope))
                term.kind()
                return term
            case s.AbsCall(operand):
                term = Abs(self.term(operand, scope))
                term.kind()
                return term
            case s.CondTerm(cases, default):
                resolved = tuple(
                    (self.formula(test, scope), self.term(value, scope))
                    for test, value in cases
                )
                term = Cond(resolved, self.term(default, scope))
                term.kind()
                return term
        raise fail("expected an expression", node)

    def ground(self, node: s.Node, sort: Sort, what: str, scope: Scope | None = None):
        """A constant value of the given sort."""
        term = self.term(node, scope)
        if not term.is_ground():
            raise fail(f"{what} must be a constant", node)
        value = term.evaluate(None, {})
        if not sort.contains(value):
            raise fail(f"{what} = {value} is outside the carrier of sort {sort.name}", node)
        return value

    # ------------------------------------------------------------------------
    # Formulas

    def formula(self, node: s.Node, scope: Scope | None = None) -> Formula:
        scope = scope or self.scope
        try:
            return self._formula(node, scope)
        except NoesisError as err:
            raise fail(str(err), node) from err

    def _formula(self, node: s.Node, scope: Scope) -> Formula:
        match node:
            case s.BoolLit(value):
                return TRUE if value else FALSE
            case s.Cmp(op, left, right):
                equal = "=" if op == "!=" else op
                atom = Compare(equal, self.term(left, scope), self.term(right, scope))
                atom.check_sorts()
                return Not(atom) if op == "!=" else atom
            case s.Sugar(fluent, arg):
                if fluent.text not in scope.fluents or fluent.text in scope.variables:
                    if fluent.text in scope.foreign:
                        raise fail(scope.foreign_message, fluent)
                    raise fail(f"unknown fluent {fluent.text}", fluent)
                ref = FluentRef(fluent.text, scope.fluents[fluent.text])
                atom = Compare("=", ref, self.term(arg, scope))
                atom.check_sorts()
                return atom
            case s.NotF(body):
                return Not(self.formula(body, scope))
            case s.AndF(parts):
                return And(tuple(self.formula(p, scope) for p in parts))
            case s.OrF(parts):
                return Or(tuple(self.formula(p, scope) for p in parts))
            case s.Quant(kind, var, sort_name, body):
                sort = self.sort(sort_name, scope)
                inner = scope.inner(**{var.text: sort})
                quantified = Exists if kind == "exists" else Forall
                return quantified(Var(var.text, sort), self.formula(body, inner))
            case s.KnowF(body):
                return Know(self.objective(body, scope))
            case s.BelF(body, op, bound):
                if op == "!=":
                    raise fail("bel() cannot be compared with !=", node)
                value = self.term(bound, scope).evaluate(None, {})
                return Bel(self.objective(body, scope), op, Fraction(value))
        raise fail("expected a formula", node)

    def objective(self, node: s.Node, scope: Scope) -> Formula:
        body = self.formula(node, scope)
        if not body.is_objective():
            raise fail("nested epistemic operator", node)
        return body

    def closed(self, node: s.Node, scope: Scope | None = None) -> Formula:
        """A formula with no free variables outside the scope."""
        scope = scope or self.scope
        phi = self.formula(node, scope)
        unbound = phi.free_vars() - set(scope.variables)
        if unbound:
            raise fail(f"unbound variable {', '.join(sorted(unbound))}", node)
        return phi

    # ------------------------------------------------------------------------
    # Programs

    def program(self, statements, scope: Scope | None = None) -> Program:
        scope = scope or self.scope
        return sequence(*(self.statement(st, scope) for st in statements))

    def statement(self, node: s.Node, scope: Scope) -> Program:
        match node:
            case s.ActStmt():
                return self.act(node, scope)
            case s.TestStmt(cond):
                return Test(self.closed(cond, scope))
            case s.IfStmt(cond, then, else_):
                return If(
                    self.closed(cond, scope),
                    self.program(then, scope),
                    self.program(else_, scope) if else_ else NIL,
                )
            case s.WhileStmt(cond, body):
                return While(self.closed(cond, scope), self.program(body, scope))
        raise fail("expected a statement", node)

    def act(self, node: s.ActStmt, scope: Scope) -> Act:
        name = node.name.text
        if name in scope.foreign:
            raise fail(scope.foreign_message, node.name)
        if name not in scope.actions:
            raise fail(f"unknown action {name}", node.name)
        params = scope.actions[name].agent_params
        if len(params) != len(node.args):
            msg = f"{name} takes {len(params)} argument(s), got {len(node.args)}"
            raise fail(msg, node.name)

        args = []
        for param, arg_node in zip(params, node.args, strict=True):
            arg = self.term(arg_node, scope)
            if arg.fluents():
                raise fail("action arguments cannot mention fluents", arg_node)
            expected = param.sort if not param.sort.is_integer else "integer"
            if not compatible(expected, arg.kind()):
                msg = f"argument {param.name} must have sort {param.sort.name}"
                raise fail(msg, arg_node)
            if arg.is_ground():
                value = arg.evaluate(None, {})
                if not param.sort.contains(value):
                    msg = (
                        f"{param.name} = {value} is outside the carrier "
                        f"of sort {param.sort.name}"
                    )
                    raise fail(msg, arg_node)
            args.append(arg)
        return Act(name, tuple(args))
