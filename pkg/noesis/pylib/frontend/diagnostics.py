from dataclasses import dataclass
from enum import StrEnum

import pyparsing as pp

RED = "\x1b[1;31m"
YELLOW = "\x1b[1;33m"
RESET = "\x1b[0m"


class Severity(StrEnum):
    ERROR = "error"
    WARNING = "warning"


@dataclass(frozen=True)
class SourceSpan:
    file: str
    line: int  # 1-based
    column: int  # 1-based
    length: int = 1

    def __str__(self) -> str:
        return f"{self.file}:{self.line}:{self.column}"


def span_at(text: str, loc: int, length: int = 1, file: str = "<input>") -> SourceSpan:
    loc = min(max(loc, 0), len(text))
    return SourceSpan(file, pp.lineno(loc, text), pp.col(loc, text), max(length, 1))


@dataclass(frozen=True)
class Diagnostic:
    severity: Severity
    message: str
    span: SourceSpan
    hint: str = ""

    def render(self, text: str | None = None, *, color: bool = False) -> str:
        label = str(self.severity)
        if color:
            label = f"{RED if self.severity == Severity.ERROR else YELLOW}{label}{RESET}"
        lines = [f"{self.span}: {label}: {self.message}"]

        if text is not None:
            source = text.splitlines()
            if 0 < self.span.line <= len(source):
                line = source[self.span.line - 1]
                lines.append(f"    {line}")
                lines.append("    " + " " * (self.span.column - 1) + "^" * self.span.length)

        if self.hint:
            lines.append(f"    hint: {self.hint}")
        return "\n".join(lines)


def error(message: str, text: str, loc: int, file: str, length: int = 1) -> Diagnostic:
    return Diagnostic(Severity.ERROR, message, span_at(text, loc, length, file))
