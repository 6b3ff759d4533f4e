from pathlib import Path

from noesis.pylib.action_theory import BAT
from noesis.pylib.errors import ParseError
from noesis.pylib.frontend import grammar
from noesis.pylib.frontend.diagnostics import error
from noesis.pylib.frontend.resolver import Resolver, ResolveError, scope_of
from noesis.pylib.logic.formula import Formula
from noesis.pylib.program import Program


def parse_program(text: str, bat: BAT, file: str = "<input>") -> Program:
    tokens = grammar.parse_text(grammar.program_file, text, file)
    try:
        return Resolver(scope_of(bat)).program(list(tokens))
    except ResolveError as err:
        diagnostic = error(err.message, text, err.loc, file, err.length)
        raise ParseError([diagnostic]) from err


def parse_formula(text: str, bat: BAT, file: str = "<formula>") -> Formula:
    """A closed formula, as written in program guards or on the command line."""
    tokens = grammar.parse_text(grammar.formula_text, text, file)
    try:
        return Resolver(scope_of(bat)).closed(tokens[0])
    except ResolveError as err:
        diagnostic = error(err.message, text, err.loc, file, err.length)
        raise ParseError([diagnostic]) from err


def read_program(path: Path, bat: BAT) -> Program:
    return parse_program(path.read_text(encoding="utf-8"), bat, str(path))
