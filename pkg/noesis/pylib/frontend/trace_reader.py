"""Read trace JSON back into a Trace."""

import json
from pathlib import Path

import regex as re

from noesis.pylib.action_theory import GroundAction, IssuedAction, Observation
from noesis.pylib.belief import BeliefState, normalize
from noesis.pylib.errors import ParseError
from noesis.pylib.frontend.diagnostics import error
from noesis.pylib.trace import Status, Trace, TraceStep
from noesis.pylib.util import to_rational
from noesis.pylib.world import World

ACTION_RE = re.compile(r"^(?P<name>\w+)\((?P<args>.*)\)$")
INT_RE = re.compile(r"^-?\d+$")


def decode_arg(text: str):
    text = text.strip()
    if text == "_":
        return None
    if INT_RE.match(text):
        return int(text)
    return text


def decode_action(text: str) -> tuple[str, tuple]:
    match = ACTION_RE.match(text.strip())
    if not match:
        msg = f"not an action term: {text!r}"
        raise ValueError(msg)
    args = match.group("args").strip()
    values = tuple(decode_arg(a) for a in args.split(",")) if args else ()
    return match.group("name"), values


def decode_belief(rows: list[dict]) -> BeliefState:
    return normalize((World.of(r["world"]), to_rational(r["weight"])) for r in rows)


def decode_step(row: dict) -> TraceStep:
    name, agent = decode_action(row["issued"])
    _, actual = decode_action(row["actual"])
    _, observed = decode_action(row["observed"])
    outcome = actual[len(agent) :]
    shown = observed[len(agent) :]
    hidden = tuple(v is None for v in shown)
    belief = decode_belief(row["belief"]) if "belief" in row else None
    return TraceStep(
        i=row["i"],
        issued=IssuedAction(name, agent),
        actual=GroundAction(name, agent, outcome, hidden),
        observed=Observation(name, agent, shown),
        belief=belief,
    )


def parse_trace(text: str, file: str = "<input>") -> Trace:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as err:
        diagnostic = error(f"bad trace JSON: {err.msg}", text, err.pos, file)
        raise ParseError([diagnostic]) from err

    try:
        return Trace(
            steps=[decode_step(r) for r in data["steps"]],
            status=Status(data["status"]),
            reason=data.get("reason", ""),
            oracle=data.get("oracle", {}),
            bat_digest=data.get("bat_digest", ""),
        )
    except (KeyError, TypeError, ValueError) as err:
        raise ParseError([error(f"malformed trace: {err}", text, 0, file)]) from err


def read_trace(path: Path) -> Trace:
    return parse_trace(path.read_text(encoding="utf-8"), str(path))
