"""
The pyparsing grammars for action theories, programs, formulas and mappings.

Parse actions build the raw nodes in `syntax`; symbol resolution happens later.
Keywords followed by `-` stop backtracking so a malformed statement is reported
where it goes wrong instead of at the start of the file.
"""

import pyparsing as pp

from noesis.pylib.errors import ParseError
from noesis.pylib.frontend import syntax as s
from noesis.pylib.frontend.diagnostics import error
from noesis.pylib.util import to_rational

pp.ParserElement.enable_packrat()

KEYWORDS = """
    abs action actual and bel belief case cond effects else exists false fluent
    forall hidden if in initial int know likelihood not or poss sensed sort test
    theory true weight while
    """.split()


def kw(word: str) -> pp.Suppress:
    return pp.Keyword(word).suppress()


LP, RP = pp.Suppress("("), pp.Suppress(")")
LBRACE, RBRACE = pp.Suppress("{"), pp.Suppress("}")
LBRACK, RBRACK = pp.Suppress("["), pp.Suppress("]")
COLON, SEMI, EQ = pp.Suppress(":"), pp.Suppress(";"), pp.Suppress("=")
DOTDOT, ARROW, ASSIGN = pp.Suppress(".."), pp.Suppress("->"), pp.Suppress(":=")
CMP_OP = pp.one_of("<= >= != = < >").set_name("comparison")

RESERVED = "|".join(KEYWORDS)

# Keywords are excluded by the lookahead
NAME = pp.Regex(rf"(?!(?:{RESERVED})\b)[A-Za-z_][A-Za-z0-9_]*").set_name("name")
NAME.set_parse_action(lambda _s, loc, t: s.Name(t[0], loc=loc))

NUMBER = pp.Regex(r"\d+").set_name("integer")
NUMBER.set_parse_action(lambda _s, loc, t: s.Num(int(t[0]), loc=loc))


def to_ratio(text, loc, toks):
    try:
        return s.Ratio(to_rational(toks[0]), loc=loc)
    except ValueError as err:
        raise pp.ParseFatalException(text, loc, str(err)) from err


RATIO = pp.Regex(r"\d+\s*/\s*\d+").set_name("rational")
RATIO.set_parse_action(to_ratio)


# ----------------------------------------------------------------------------
# Terms and formulas

term = pp.Forward().set_name("expression")
formula = pp.Forward().set_name("formula")


def unary(_text, loc, toks):
    _, operand = toks[0]
    return s.Unary(operand, loc=loc)


def fold(node):
    def action(_text, loc, toks):
        items = list(toks[0])
        result = items[0]
        for op, right in zip(items[1::2], items[2::2], strict=True):
            result = node(op, result, right, loc=loc)
        return result

    return action


def junction(node):
    def action(_text, loc, toks):
        return node(tuple(toks[0][::2]), loc=loc)

    return action


def negation(_text, loc, toks):
    _, body = toks[0]
    return s.NotF(body, loc=loc)


abs_term = kw("abs") - LP + term + RP
abs_term.set_parse_action(lambda _s, loc, t: s.AbsCall(t[0], loc=loc))

cond_case = pp.Group(LP + LP + formula + RP + term + RP)
cond_else = LP + kw("else") + term + RP
cond_term = kw("cond") - pp.Group(pp.ZeroOrMore(cond_case)) + cond_else
cond_term.set_parse_action(
    lambda _s, loc, t: s.CondTerm(
        tuple((c[0], c[1]) for c in t[0]), t[1], loc=loc
    )
)

operand = RATIO | NUMBER | abs_term | cond_term | NAME

term <<= pp.infix_notation(
    operand,
    [
        (pp.Literal("-"), 1, pp.OpAssoc.RIGHT, unary),
        (pp.one_of("+ -"), 2, pp.OpAssoc.LEFT, fold(s.Binary)),
    ],
)

comparison = term + CMP_OP + term
comparison.set_parse_action(lambda _s, loc, t: s.Cmp(t[1], t[0], t[2], loc=loc))

sugar = NAME + LP + term + RP
sugar.set_parse_action(lambda _s, loc, t: s.Sugar(t[0], t[1], loc=loc))

quantifier = (
    (pp.Keyword("exists") | pp.Keyword("forall"))
    - NAME
    + COLON
    + NAME
    + LP
    + formula
    + RP
)
quantifier.set_parse_action(lambda _s, loc, t: s.Quant(t[0], t[1], t[2], t[3], loc=loc))

know = kw("know") - LP + formula + RP
know.set_parse_action(lambda _s, loc, t: s.KnowF(t[0], loc=loc))

bel = kw("bel") - LP + formula + RP + CMP_OP + (RATIO | NUMBER)
bel.set_parse_action(lambda _s, loc, t: s.BelF(t[0], t[1], t[2], loc=loc))

boolean = pp.Keyword("true") | pp.Keyword("false")
boolean.set_parse_action(lambda _s, loc, t: s.BoolLit(t[0] == "true", loc=loc))

f_atom = boolean | quantifier | know | bel | comparison | sugar

formula <<= pp.infix_notation(
    f_atom,
    [
        (pp.Keyword("not") | pp.Literal("!"), 1, pp.OpAssoc.RIGHT, negation),
        (pp.Keyword("and"), 2, pp.OpAssoc.LEFT, junction(s.AndF)),
        (pp.Keyword("or"), 2, pp.OpAssoc.LEFT, junction(s.OrF)),
    ],
)


# ----------------------------------------------------------------------------
# Programs

stmt = pp.Forward().set_name("statement")
block = pp.Group(LBRACE + pp.ZeroOrMore(stmt) + RBRACE)

act_stmt = NAME + LP + pp.Group(pp.Optional(pp.DelimitedList(term))) + RP - SEMI
act_stmt.set_parse_action(lambda _s, loc, t: s.ActStmt(t[0], tuple(t[1]), loc=loc))

test_stmt = kw("test") - formula + SEMI
test_stmt.set_parse_action(lambda _s, loc, t: s.TestStmt(t[0], loc=loc))

while_stmt = kw("while") - formula + block
while_stmt.set_parse_action(lambda _s, loc, t: s.WhileStmt(t[0], tuple(t[1]), loc=loc))

if_stmt = pp.Forward()
if_stmt <<= (
    kw("if") - formula + block + pp.Optional(kw("else") - (block | pp.Group(if_stmt)))
)
if_stmt.set_parse_action(
    lambda _s, loc, t: s.IfStmt(
        t[0], tuple(t[1]), tuple(t[2]) if len(t) > 2 else (), loc=loc
    )
)

stmt <<= if_stmt | while_stmt | test_stmt | act_stmt

program_file = pp.ZeroOrMore(stmt) + pp.StringEnd()
formula_text = formula + pp.StringEnd()


# ----------------------------------------------------------------------------
# Action theories

theory_decl = kw("theory") - NAME
theory_decl.set_parse_action(lambda _s, loc, t: s.TheoryDecl(t[0], loc=loc))

int_range = kw("int") - LBRACK + term + DOTDOT + term + RBRACK
int_range.set_parse_action(lambda _s, loc, t: s.Range(t[0], t[1], loc=loc))
enum_set = pp.Group(LBRACE + pp.DelimitedList(NAME) + RBRACE)


def sort_decl_action(_text, loc, toks):
    name, carrier = toks[0], toks[1]
    if isinstance(carrier, s.Range):
        return s.SortDecl(name, carrier.lo, carrier.hi, loc=loc)
    return s.SortDecl(name, constants=tuple(carrier), loc=loc)


sort_decl = kw("sort") - NAME + EQ + (int_range | enum_set)
sort_decl.set_parse_action(sort_decl_action)

fluent_decl = kw("fluent") - NAME + COLON + NAME
fluent_decl.set_parse_action(lambda _s, loc, t: s.FluentDecl(t[0], t[1], loc=loc))

domain_range = term + DOTDOT + term
domain_range.set_parse_action(lambda _s, loc, t: s.Range(t[0], t[1], loc=loc))
domain_item = domain_range | term

param = (
    pp.Optional(pp.Keyword("hidden") | pp.Keyword("sensed"), default="agent")
    + NAME
    + COLON
    + NAME
    + pp.Optional(kw("in") - LBRACE + pp.DelimitedList(domain_item) + RBRACE)
)
param.set_parse_action(
    lambda _s, loc, t: s.ParamDecl(t[0], t[1], t[2], tuple(t[3:]), loc=loc)
)

assign = NAME + EQ + term
assign.set_parse_action(lambda _s, loc, t: s.Assign(t[0], t[1], loc=loc))

effect = NAME + ASSIGN + term
effect.set_parse_action(lambda _s, loc, t: s.Assign(t[0], t[1], loc=loc))

poss_clause = kw("poss") - COLON + formula
poss_clause.set_parse_action(lambda _s, loc, t: s.Clause("poss", t[0], loc=loc))

likelihood_clause = kw("likelihood") - COLON + term
likelihood_clause.set_parse_action(
    lambda _s, loc, t: s.Clause("likelihood", t[0], loc=loc)
)

effects_clause = kw("effects") - COLON + pp.DelimitedList(effect)
effects_clause.set_parse_action(lambda _s, loc, t: s.Clause("effects", tuple(t), loc=loc))

clause = poss_clause | likelihood_clause | effects_clause

action_decl = (
    kw("action")
    - NAME
    + LP
    + pp.Group(pp.Optional(pp.DelimitedList(param)))
    + RP
    + pp.ZeroOrMore(clause)
)
action_decl.set_parse_action(
    lambda _s, loc, t: s.ActionDecl(t[0], tuple(t[1]), tuple(t[2:]), loc=loc)
)

actual_decl = kw("actual") - pp.DelimitedList(assign)
actual_decl.set_parse_action(lambda _s, loc, t: s.ActualDecl(tuple(t), loc=loc))

world_decl = kw("weight") - (RATIO | NUMBER) + COLON + pp.DelimitedList(assign)
world_decl.set_parse_action(lambda _s, loc, t: s.WorldDecl(t[0], tuple(t[1:]), loc=loc))

belief_decl = kw("belief") - pp.OneOrMore(world_decl)
belief_decl.set_parse_action(lambda _s, loc, t: s.BeliefDecl(tuple(t), loc=loc))

initial_decl = kw("initial") - (actual_decl | belief_decl)

bat_file = (
    pp.Optional(theory_decl)
    + pp.ZeroOrMore(sort_decl | fluent_decl | action_decl | initial_decl)
    + pp.StringEnd()
)


# ----------------------------------------------------------------------------
# Refinement mappings

case_arm = term + COLON + formula + SEMI
case_arm.set_parse_action(lambda _s, loc, t: s.CaseArm(t[0], t[1], loc=loc))

case_form = pp.Group(kw("case") - NAME + LBRACE + pp.OneOrMore(case_arm) + RBRACE)
template_form = formula + SEMI


def fluent_entry_action(_text, loc, toks):
    fluent, var, body = toks[0], toks[1], toks[2]
    if isinstance(body, s.Node):
        return s.FluentEntry(fluent, var, template=body, loc=loc)
    return s.FluentEntry(fluent, var, body[0], tuple(body[1:]), loc=loc)


fluent_entry = kw("fluent") - NAME + LP + NAME + RP + ARROW + (case_form | template_form)
fluent_entry.set_parse_action(fluent_entry_action)

action_entry = (
    kw("action")
    - NAME
    + LP
    + pp.Group(pp.Optional(pp.DelimitedList(NAME)))
    + RP
    + ARROW
    + block
)
action_entry.set_parse_action(
    lambda _s, loc, t: s.ActionEntry(t[0], tuple(t[1]), tuple(t[2]), loc=loc)
)

mapping_file = pp.ZeroOrMore(fluent_entry | action_entry) + pp.StringEnd()

for _element in (program_file, formula_text, bat_file, mapping_file):
    _element.ignore(pp.python_style_comment)


def parse_text(element: pp.ParserElement, text: str, file: str) -> pp.ParseResults:
    """Run a grammar over the whole text, turning failures into diagnostics."""
    try:
        return element.parse_string(text, parse_all=True)
    except pp.ParseBaseException as err:
        diagnostic = error(f"syntax error: {err.msg}", text, err.loc, file)
        raise ParseError([diagnostic]) from err
    except RecursionError as err:
        diagnostic = error("input is nested too deeply", text, 0, file)
        raise ParseError([diagnostic]) from err
