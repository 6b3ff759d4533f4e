import json
from pathlib import Path

from noesis.pylib import const
from noesis.pylib.trace import Trace, TraceStep

STYLES = ("text", "json")


def step_dict(step: TraceStep) -> dict:
    row = {
        "i": step.i,
        "issued": str(step.issued),
        "actual": str(step.actual),
        "observed": str(step.observed),
    }
    if step.belief is not None:
        row["belief"] = step.belief.snapshot()
    return row


def trace_dict(trace: Trace) -> dict:
    return {
        "format_version": const.TRACE_FORMAT_VERSION,
        "bat_digest": trace.bat_digest,
        "oracle": trace.oracle,
        "steps": [step_dict(s) for s in trace.steps],
        "status": str(trace.status),
        "reason": trace.reason,
    }


def trace_text(trace: Trace) -> str:
    return "⟨" + ", ".join(str(a) for a in trace.actions()) + "⟩\n"


def trace_json(trace: Trace) -> str:
    return json.dumps(trace_dict(trace), indent=4, ensure_ascii=False) + "\n"


def emit_trace(trace: Trace, style: str = "text") -> bytes:
    if style not in STYLES:
        msg = f"unknown trace style {style}"
        raise ValueError(msg)
    text = trace_text(trace) if style == "text" else trace_json(trace)
    return text.encode("utf-8")


def write_trace(trace: Trace, path: Path, style: str = "json") -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(emit_trace(trace, style))
