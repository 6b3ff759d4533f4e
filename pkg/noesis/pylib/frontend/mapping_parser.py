"""
Read refinement mappings.

Template bodies are resolved against the low-level theory. The high-level
constants are visible so templates can branch on their parameters, but
high-level fluents and actions are not.
"""

from pathlib import Path

from noesis.pylib.abstraction import ActionMapping, FluentMapping, RefinementMapping
from noesis.pylib.action_theory import BAT
from noesis.pylib.errors import ParseError
from noesis.pylib.frontend import grammar
from noesis.pylib.frontend import syntax as s
from noesis.pylib.frontend.diagnostics import Diagnostic, error, span_at
from noesis.pylib.frontend.resolver import Resolver, ResolveError, Scope, fail
from noesis.pylib.logic.term import Var

FOREIGN = "high-level symbol in low-level template"


def template_scope(hl: BAT, ll: BAT) -> Scope:
    constants = {c: sort for sort in hl.sorts.values() for c in sort.constants}
    constants |= {c: sort for sort in ll.sorts.values() for c in sort.constants}
    foreign = (set(hl.fluents) | set(hl.actions)) - set(ll.fluents) - set(ll.actions)
    return Scope(
        sorts=hl.sorts | ll.sorts,
        fluents=dict(ll.fluents),
        constants=constants,
        actions=dict(ll.actions),
        foreign=frozenset(foreign),
        foreign_message=FOREIGN,
    )


class MappingBuilder:
    def __init__(self, text: str, file: str, hl: BAT, ll: BAT):
        self.text = text
        self.file = file
        self.hl = hl
        self.scope = template_scope(hl, ll)
        self.resolver = Resolver(self.scope)
        self.fluents: dict[str, FluentMapping] = {}
        self.actions: dict[str, ActionMapping] = {}
        self.spans: dict = {}
        self.diagnostics: list[Diagnostic] = []

    def build(self, entries: list[s.Node]) -> RefinementMapping:
        # Entries that failed to resolve already have a diagnostic
        named: set[str] = set()
        for entry in entries:
            try:
                if isinstance(entry, s.FluentEntry):
                    named.add(f"fluent {entry.fluent.text}")
                    self.fluent_entry(entry)
                else:
                    named.add(f"action {entry.action.text}")
                    self.action_entry(entry)
            except ResolveError as err:
                self.diagnostics.append(
                    error(err.message, self.text, err.loc, self.file, err.length)
                )

        for fluent in self.hl.fluents:
            if f"fluent {fluent}" not in named:
                msg = f"unmapped fluent {fluent}"
                self.diagnostics.append(error(msg, self.text, 0, self.file))
        for action in self.hl.actions:
            if f"action {action}" not in named:
                msg = f"unmapped action {action}"
                self.diagnostics.append(error(msg, self.text, 0, self.file))

        if self.diagnostics:
            raise ParseError(self.diagnostics)
        return RefinementMapping(self.fluents, self.actions, self.spans)

    def objective(self, node: s.Node, scope: Scope):
        phi = self.resolver.closed(node, scope)
        if not phi.is_objective():
            raise fail("mapped fluent formulas must be objective", node)
        return phi

    def fluent_entry(self, entry: s.FluentEntry) -> None:
        fluent = entry.fluent.text
        if fluent not in self.hl.fluents:
            raise fail(f"unknown high-level fluent {fluent}", entry.fluent)
        if fluent in self.fluents:
            raise fail(f"duplicate mapping for fluent {fluent}", entry.fluent)
        sort = self.hl.fluents[fluent]
        var = Var(entry.var.text, sort)
        scope = self.scope.inner(**{var.name: sort})
        self.spans[f"fluent {fluent}"] = span_at(self.text, entry.loc, 1, self.file)

        if entry.template is not None:
            template = self.objective(entry.template, scope)
            self.fluents[fluent] = FluentMapping(fluent, var, template=template)
            return

        if entry.case_var.text != var.name:
            raise fail(f"case must branch on {var.name}", entry.case_var)
        cases = []
        for arm in entry.arms:
            value = self.resolver.ground(arm.value, sort, fluent)
            if any(v == value for v, _ in cases):
                raise fail(f"duplicate case {value}", arm.value)
            cases.append((value, self.objective(arm.body, scope)))
        for value in sort.carrier:
            if all(v != value for v, _ in cases):
                raise fail(f"no case for {fluent} = {value}", entry.fluent)
        self.fluents[fluent] = FluentMapping(fluent, var, tuple(cases))

    def action_entry(self, entry: s.ActionEntry) -> None:
        action = entry.action.text
        if action not in self.hl.actions:
            raise fail(f"unknown high-level action {action}", entry.action)
        if action in self.actions:
            raise fail(f"duplicate mapping for action {action}", entry.action)
        params = self.hl.actions[action].agent_params
        if len(params) != len(entry.params):
            msg = (
                f"{action} has {len(params)} parameter(s), "
                f"the mapping names {len(entry.params)}"
            )
            raise fail(msg, entry.action)
        variables = tuple(
            Var(name.text, param.sort)
            for name, param in zip(entry.params, params, strict=True)
        )
        scope = self.scope.inner(**{v.name: v.sort for v in variables})
        self.spans[f"action {action}"] = span_at(self.text, entry.loc, 1, self.file)
        body = self.resolver.program(entry.body, scope)
        self.actions[action] = ActionMapping(action, variables, body)


def parse_mapping(text: str, hl: BAT, ll: BAT, file: str = "<input>") -> RefinementMapping:
    entries = grammar.parse_text(grammar.mapping_file, text, file)
    return MappingBuilder(text, file, hl, ll).build(list(entries))


def read_mapping(path: Path, hl: BAT, ll: BAT) -> RefinementMapping:
    return parse_mapping(path.read_text(encoding="utf-8"), hl, ll, str(path))
