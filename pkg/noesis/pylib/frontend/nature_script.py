"""
Nature scripts: the outcomes nature picks, in order.

    # wall robot, starting 3 m out
    actual Loc = 3
    3 0 3 -1 2 -1

Single-outcome actions take a bare value, multi-outcome ones a tuple like
(1, near). Actions with no outcome arguments consume nothing.
"""

from pathlib import Path

import regex as re

from noesis.pylib.errors import ParseError
from noesis.pylib.frontend.diagnostics import error
from noesis.pylib.oracle import NatureScript

TOKEN_RE = re.compile(
    r"""
    (?P<space> \s+ )
    | (?P<comment> \#[^\n]* )
    | (?P<int> -?\d+ )
    | (?P<name> [A-Za-z_]\w* )
    | (?P<punct> [(),=] )
    | (?P<bad> . )
    """,
    flags=re.VERBOSE,
)


def tokenize(text: str, file: str) -> list[tuple[str, str, int]]:
    tokens = []
    for match in TOKEN_RE.finditer(text):
        kind = match.lastgroup
        if kind in ("space", "comment"):
            continue
        if kind == "bad":
            msg = f"unexpected character {match.group()!r}"
            raise ParseError([error(msg, text, match.start(), file)])
        tokens.append((kind, match.group(), match.start()))
    return tokens


class ScriptReader:
    def __init__(self, text: str, file: str):
        self.text = text
        self.file = file
        self.tokens = tokenize(text, file)
        self.pos = 0

    def fail(self, message: str) -> ParseError:
        loc = self.tokens[self.pos][2] if self.pos < len(self.tokens) else len(self.text)
        return ParseError([error(message, self.text, loc, self.file)])

    def peek(self) -> tuple[str, str, int] | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self, kind: str, text: str | None = None) -> str:
        token = self.peek()
        if token is None or token[0] != kind or (text is not None and token[1] != text):
            expected = repr(text) if text else kind
            raise self.fail(f"expected {expected}")
        self.pos += 1
        return token[1]

    def value(self):
        token = self.peek()
        if token is not None and token[0] == "int":
            self.pos += 1
            return int(token[1])
        return self.take("name")

    def header(self) -> tuple[tuple[str, object], ...]:
        token = self.peek()
        if token is None or token[:2] != ("name", "actual"):
            return ()
        self.pos += 1
        assignments = []
        while True:
            fluent = self.take("name")
            self.take("punct", "=")
            assignments.append((fluent, self.value()))
            token = self.peek()
            if token is None or token[:2] != ("punct", ","):
                return tuple(assignments)
            self.pos += 1

    def entry(self) -> tuple:
        token = self.peek()
        if token[:2] != ("punct", "("):
            return (self.value(),)
        self.pos += 1
        values = [self.value()]
        while self.peek() is not None and self.peek()[:2] == ("punct", ","):
            self.pos += 1
            values.append(self.value())
        self.take("punct", ")")
        return tuple(values)

    def read(self) -> NatureScript:
        actual = self.header()
        entries = []
        while self.peek() is not None:
            entries.append(self.entry())
        return NatureScript(tuple(entries), actual)


def parse_script(text: str, file: str = "<input>") -> NatureScript:
    return ScriptReader(text, file).read()


def read_script(path: Path) -> NatureScript:
    return parse_script(path.read_text(encoding="utf-8"), str(path))
