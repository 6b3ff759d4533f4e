"""Read .bat files into validated action theories."""

from fractions import Fraction
from pathlib import Path

from noesis.pylib.action_theory import (
    BAT,
    ActionSchema,
    DomainRange,
    Param,
    ParamKind,
)
from noesis.pylib.belief import normalize
from noesis.pylib.errors import NoesisError, ParseError
from noesis.pylib.frontend import grammar
from noesis.pylib.frontend import syntax as s
from noesis.pylib.frontend.diagnostics import Diagnostic, Severity, error, span_at
from noesis.pylib.frontend.resolver import Resolver, ResolveError, Scope, fail
from noesis.pylib.logic.formula import TRUE
from noesis.pylib.logic.sort import Sort
from noesis.pylib.logic.term import INTEGER, RATIONAL, Const, Term, compatible
from noesis.pylib.world import World


# Sorts first, then fluents, actions and the initial state
ORDER = (s.TheoryDecl, s.SortDecl, s.FluentDecl, s.ActionDecl, s.ActualDecl, s.BeliefDecl)


class BatBuilder:
    def __init__(self, text: str, file: str):
        self.text = text
        self.file = file
        self.name = Path(file).stem if not file.startswith("<") else "theory"
        self.scope = Scope()
        self.resolver = Resolver(self.scope)
        self.diagnostics: list[Diagnostic] = []
        self.spans: dict = {}
        self.initial: list[tuple[World, Fraction]] = []
        self.actual: World | None = None

    def span(self, node: s.Node, length: int = 1):
        if isinstance(node, s.Name):
            length = len(node.text)
        return span_at(self.text, node.loc, length, self.file)

    def build(self, decls: list[s.Node]) -> BAT:
        for kind in ORDER:
            for decl in decls:
                if isinstance(decl, kind):
                    try:
                        self.declare(decl)
                    except ResolveError as err:
                        self.diagnostics.append(
                            error(err.message, self.text, err.loc, self.file, err.length)
                        )
        if self.diagnostics:
            raise ParseError(self.diagnostics)

        # Declared weights are relative; the theory holds them normalized
        initial = normalize(self.initial).entries if self.initial else ()
        return BAT(
            name=self.name,
            sorts=self.scope.sorts,
            fluents=self.scope.fluents,
            actions=self.scope.actions,
            initial=initial,
            actual=self.actual,
            spans=self.spans,
        )

    def declare(self, decl: s.Node) -> None:
        match decl:
            case s.TheoryDecl(name):
                self.name = name.text
            case s.SortDecl():
                self.declare_sort(decl)
            case s.FluentDecl():
                self.declare_fluent(decl)
            case s.ActionDecl():
                self.declare_action(decl)
            case s.ActualDecl():
                self.declare_actual(decl)
            case s.BeliefDecl():
                self.declare_belief(decl)

    def declare_sort(self, decl: s.SortDecl) -> None:
        name = decl.name.text
        if name in self.scope.sorts:
            raise fail(f"duplicate declaration of sort {name}", decl.name)
        try:
            if decl.constants:
                for const in decl.constants:
                    if const.text in self.scope.constants:
                        owner = self.scope.constants[const.text].name
                        msg = f"constant {const.text} already belongs to sort {owner}"
                        raise fail(msg, const)
                sort = Sort.enumeration(name, [c.text for c in decl.constants])
            else:
                lo = self.integer(decl.lo)
                hi = self.integer(decl.hi)
                sort = Sort.interval(name, lo, hi)
        except NoesisError as err:
            raise fail(str(err), decl.name) from err
        self.scope.sorts[name] = sort
        self.scope.constants |= {c: sort for c in sort.constants}
        self.spans[f"sort {name}"] = self.span(decl.name)

    def integer(self, node: s.Node) -> int:
        value = self.resolver.term(node).evaluate(None, {})
        if not isinstance(value, int):
            raise fail("sort bounds must be integers", node)
        return value

    def declare_fluent(self, decl: s.FluentDecl) -> None:
        name = decl.name.text
        if name in self.scope.fluents:
            raise fail(f"duplicate declaration of fluent {name}", decl.name)
        self.scope.fluents[name] = self.resolver.sort(decl.sort)
        self.spans[f"fluent {name}"] = self.span(decl.name)

    def declare_action(self, decl: s.ActionDecl) -> None:
        name = decl.name.text
        if name in self.scope.actions:
            raise fail(f"duplicate declaration of action {name}", decl.name)
        self.spans[f"action {name}"] = self.span(decl.name)

        params = []
        agents: dict[str, Sort] = {}
        for node in decl.params:
            if any(p.name == node.name.text for p in params):
                raise fail(f"duplicate parameter {node.name.text}", node.name)
            sort = self.resolver.sort(node.sort)
            kind = ParamKind(node.kind)
            if node.domain and kind == ParamKind.AGENT:
                raise fail("only nature parameters take an outcome domain", node.name)
            domain = tuple(self.domain_item(i, agents, sort) for i in node.domain)
            params.append(Param(node.name.text, sort, kind, domain))
            if kind == ParamKind.AGENT:
                agents[node.name.text] = sort

        inner = self.scope.inner(**{p.name: p.sort for p in params})
        poss, likelihood, effects = TRUE, Const(1), ()
        seen = set()
        for clause in decl.clauses:
            if clause.kind in seen:
                raise fail(f"duplicate {clause.kind} clause", clause)
            seen.add(clause.kind)
            match clause.kind:
                case "poss":
                    poss = self.resolver.formula(clause.value, inner)
                case "likelihood":
                    likelihood = self.resolver.term(clause.value, inner)
                case "effects":
                    effects = self.effects(clause.value, inner)

        schema = ActionSchema(name, tuple(params), poss, likelihood, effects)
        self.scope.actions[name] = schema

    def domain_item(self, item: s.Node, agents: dict[str, Sort], sort: Sort):
        scope = Scope(
            sorts=self.scope.sorts,
            constants=self.scope.constants,
            variables=dict(agents),
            foreign=frozenset(self.scope.fluents),
            foreign_message="outcome domains cannot mention fluents",
        )
        if isinstance(item, s.Range):
            if not sort.is_integer:
                raise fail(f"a range needs an integer sort, not {sort.name}", item)
            lo = self.domain_term(item.lo, scope, sort)
            return DomainRange(lo, self.domain_term(item.hi, scope, sort))
        return self.domain_term(item, scope, sort)

    def domain_term(self, node: s.Node, scope: Scope, sort: Sort) -> Term:
        term = self.resolver.term(node, scope)
        expected = sort if not sort.is_integer else INTEGER
        try:
            kind = term.kind()
        except NoesisError as err:
            raise fail(str(err), node) from err
        if kind == RATIONAL or not compatible(expected, kind):
            raise fail(f"outcome domain item must have sort {sort.name}", node)
        return term

    def effects(self, assigns: tuple[s.Assign, ...], scope: Scope):
        effects = []
        for assign in assigns:
            fluent = assign.fluent.text
            if fluent not in self.scope.fluents:
                raise fail(f"unknown fluent {fluent}", assign.fluent)
            if any(f == fluent for f, _ in effects):
                raise fail(f"two effects on {fluent}", assign.fluent)
            effects.append((fluent, self.resolver.term(assign.value, scope)))
        return tuple(effects)

    def assignments(self, assigns: tuple[s.Assign, ...]) -> World:
        values = {}
        for assign in assigns:
            fluent = assign.fluent.text
            if fluent not in self.scope.fluents:
                raise fail(f"unknown fluent {fluent}", assign.fluent)
            if fluent in values:
                raise fail(f"{fluent} assigned twice", assign.fluent)
            sort = self.scope.fluents[fluent]
            values[fluent] = self.resolver.ground(assign.value, sort, fluent)
        return World.of(values)

    def declare_actual(self, decl: s.ActualDecl) -> None:
        if self.actual is not None:
            raise fail("duplicate initial actual declaration", decl)
        self.spans["initial actual"] = self.span(decl)
        self.actual = self.assignments(decl.assigns)

    def declare_belief(self, decl: s.BeliefDecl) -> None:
        if "initial belief" in self.spans:
            raise fail("duplicate initial belief declaration", decl)
        self.spans["initial belief"] = self.span(decl)
        for world in decl.worlds:
            term = self.resolver.term(world.weight)
            if not term.is_ground():
                raise fail("weights must be constants", world.weight)
            weight = term.evaluate(None, {})
            if isinstance(weight, str | bool) or weight <= 0:
                raise fail("weights must be positive numbers", world.weight)
            self.initial.append((self.assignments(world.assigns), Fraction(weight)))


def validation_diagnostics(bat: BAT, text: str, file: str) -> list[Diagnostic]:
    diagnostics = []
    for issue in bat.validate().issues:
        span = bat.spans.get(issue.where) or span_at(text, 0, 1, file)
        diagnostics.append(Diagnostic(Severity.ERROR, str(issue), span))
    return diagnostics


def parse_bat(text: str, file: str = "<input>", *, validate: bool = True) -> BAT:
    tokens = grammar.parse_text(grammar.bat_file, text, file)
    bat = BatBuilder(text, file).build(list(tokens))
    if validate:
        diagnostics = validation_diagnostics(bat, text, file)
        if diagnostics:
            raise ParseError(diagnostics)
    return bat


def read_bat(path: Path, *, validate: bool = True) -> BAT:
    return parse_bat(path.read_text(encoding="utf-8"), str(path), validate=validate)
