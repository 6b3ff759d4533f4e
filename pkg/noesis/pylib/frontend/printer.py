"""
Canonical source text for every file kind.

Printing and parsing round-trip: parsing printed text gives back an equal
object. The printed action theory is also what its digest is computed from.
"""

from fractions import Fraction
from typing import TYPE_CHECKING

from noesis.pylib.action_theory import BAT, ActionSchema, DomainRange, Param, ParamKind
from noesis.pylib.logic.formula import (
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
    Truth,
)
from noesis.pylib.logic.sort import Sort
from noesis.pylib.logic.term import Abs, BinOp, Const, FluentRef, Neg, Term, Var
from noesis.pylib.oracle import NatureScript
from noesis.pylib.program import Act, If, Nil, Program, Test, While, statements
from noesis.pylib.world import World

if TYPE_CHECKING:
    from noesis.pylib.abstraction import RefinementMapping

INDENT = "    "


def ratio_text(value: Fraction | int) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def value_text(value) -> str:
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    return str(value)


# ----------------------------------------------------------------------------
# Terms and formulas


def print_term(term: Term) -> str:
    match term:
        case Const(value):
            return value_text(value)
        case Var(name) | FluentRef(name):
            return name
        case BinOp(op, left, right):
            right_text = print_term(right)
            if isinstance(right, BinOp):
                right_text = f"({right_text})"
            return f"{print_term(left)} {op} {right_text}"
        case Neg(operand):
            text = print_term(operand)
            if isinstance(operand, BinOp | Neg) or text.startswith("-"):
                text = f"({text})"
            return f"-{text}"
        case Abs(operand):
            return f"abs({print_term(operand)})"
        case Cond(cases, default):
            arms = [f"(({print_formula(c)}) {print_term(v)})" for c, v in cases]
            arms.append(f"(else {print_term(default)})")
            return "cond " + " ".join(arms)
    msg = f"cannot print {term!r}"
    raise TypeError(msg)


def print_formula(phi: Formula) -> str:
    match phi:
        case Truth(value):
            return "true" if value else "false"
        case Compare(op, left, right):
            return f"{print_term(left)} {op} {print_term(right)}"
        case Not(Compare("=", left, right)):
            return f"{print_term(left)} != {print_term(right)}"
        case Not(body):
            text = print_formula(body)
            if isinstance(body, And | Or):
                text = f"({text})"
            return f"not {text}"
        case And(parts):
            return " and ".join(wrapped(p, (And, Or)) for p in parts)
        case Or(parts):
            return " or ".join(wrapped(p, (Or,)) for p in parts)
        case Exists(var, body) | Forall(var, body):
            kind = "exists" if isinstance(phi, Exists) else "forall"
            return f"{kind} {var.name}:{var.sort.name} ({print_formula(body)})"
        case Know(body):
            return f"know({print_formula(body)})"
        case Bel(body, op, bound):
            return f"bel({print_formula(body)}) {op} {ratio_text(bound)}"
    msg = f"cannot print {phi!r}"
    raise TypeError(msg)


def wrapped(phi: Formula, kinds: tuple) -> str:
    text = print_formula(phi)
    return f"({text})" if isinstance(phi, kinds) else text


# ----------------------------------------------------------------------------
# Programs


def print_statements(program: Program, depth: int) -> list[str]:
    pad = INDENT * depth
    lines = []
    for st in statements(program):
        match st:
            case Act(name, args):
                lines.append(f"{pad}{name}({', '.join(print_term(a) for a in args)});")
            case Test(cond):
                lines.append(f"{pad}test {print_formula(cond)};")
            case If(cond, then, else_):
                lines.append(f"{pad}if {print_formula(cond)} {{")
                lines += print_statements(then, depth + 1)
                if isinstance(else_, Nil):
                    lines.append(f"{pad}}}")
                else:
                    lines.append(f"{pad}}} else {{")
                    lines += print_statements(else_, depth + 1)
                    lines.append(f"{pad}}}")
            case While(cond, body):
                lines.append(f"{pad}while {print_formula(cond)} {{")
                lines += print_statements(body, depth + 1)
                lines.append(f"{pad}}}")
    return lines


def print_program(program: Program, depth: int = 0) -> str:
    lines = print_statements(program, depth)
    return "\n".join(lines) + "\n" if lines else ""


# ----------------------------------------------------------------------------
# Action theories


def print_sort(sort: Sort) -> str:
    if sort.constants:
        return f"sort {sort.name} = {{{', '.join(sort.constants)}}}"
    return f"sort {sort.name} = int[{sort.lo}..{sort.hi}]"


def print_param(param: Param) -> str:
    prefix = "" if param.kind == ParamKind.AGENT else f"{param.kind} "
    text = f"{prefix}{param.name}: {param.sort.name}"
    if param.domain:
        items = [
            f"{print_term(i.lo)}..{print_term(i.hi)}"
            if isinstance(i, DomainRange)
            else print_term(i)
            for i in param.domain
        ]
        text += f" in {{{', '.join(items)}}}"
    return text


def print_action(schema: ActionSchema) -> list[str]:
    lines = [f"action {schema.name}({', '.join(print_param(p) for p in schema.params)})"]
    if schema.poss != Truth(True):
        lines.append(f"{INDENT}poss: {print_formula(schema.poss)}")
    if schema.likelihood != Const(1):
        lines.append(f"{INDENT}likelihood: {print_term(schema.likelihood)}")
    if schema.effects:
        effects = ", ".join(f"{f} := {print_term(t)}" for f, t in schema.effects)
        lines.append(f"{INDENT}effects: {effects}")
    return lines


def print_world(world: World) -> str:
    return ", ".join(f"{f} = {v}" for f, v in world.items())


def print_bat(bat: BAT) -> str:
    lines = [f"theory {bat.name}", ""]
    lines += [print_sort(s) for s in bat.sorts.values()]
    lines.append("")
    lines += [f"fluent {name} : {sort.name}" for name, sort in bat.fluents.items()]
    for schema in bat.actions.values():
        lines.append("")
        lines += print_action(schema)
    lines.append("")
    if bat.actual is not None:
        lines.append(f"initial actual {print_world(bat.actual)}")
    if bat.initial:
        lines.append("initial belief")
        lines += [
            f"{INDENT}weight {ratio_text(w)} : {print_world(world)}"
            for world, w in bat.initial
        ]
    return "\n".join(lines) + "\n"


# ----------------------------------------------------------------------------
# Mappings and nature scripts


def print_mapping(mapping: "RefinementMapping") -> str:
    lines = []
    for entry in mapping.fluents.values():
        head = f"fluent {entry.fluent}({entry.var.name}) ->"
        if entry.template is not None:
            lines.append(f"{head} {print_formula(entry.template)};")
            continue
        lines.append(f"{head} case {entry.var.name} {{")
        lines += [f"{INDENT}{v}: {print_formula(f)};" for v, f in entry.cases]
        lines.append("}")
    for entry in mapping.actions.values():
        params = ", ".join(v.name for v in entry.params)
        lines.append(f"action {entry.action}({params}) -> {{")
        lines += print_statements(entry.body, 1)
        lines.append("}")
    return "\n".join(lines) + "\n"


def print_script(script: NatureScript) -> str:
    lines = []
    if script.actual:
        lines.append("actual " + ", ".join(f"{f} = {v}" for f, v in script.actual))
    entries = [
        str(e[0]) if len(e) == 1 else f"({', '.join(str(v) for v in e)})"
        for e in script.entries
    ]
    lines.append(" ".join(entries))
    return "\n".join(lines) + "\n"
