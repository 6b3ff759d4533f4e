"""Exploration statistics and audit results as JSON and CSV."""

import json
from fractions import Fraction
from pathlib import Path

import pandas as pd

from noesis.pylib.util import decimal_str, rational_json, rational_str
from noesis.pylib.verifier import AuditReport, Branch, ExplorationStats


def branch_dict(branch: Branch) -> dict:
    return {
        "path": [str(a) for a in branch.path],
        "probability": rational_json(branch.probability),
        "reason": branch.reason,
    }


def optional(value: Fraction | None):
    return None if value is None else rational_json(value)


def stats_dict(stats: ExplorationStats) -> dict:
    return {
        "max_actions": stats.max_actions,
        "merge": stats.merge,
        "nodes": stats.nodes,
        "incomplete": stats.incomplete,
        "completed": rational_json(stats.completed),
        "failed": rational_json(stats.failed),
        "running": rational_json(stats.running),
        "expected_actions": optional(stats.expected_actions),
        "goals": [
            {
                "goal": row.goal,
                "believed": rational_json(row.believed),
                "actual": optional(row.actual),
            }
            for row in stats.goals
        ],
        "counterexamples": [branch_dict(b) for b in stats.counterexamples],
        "unfinished": [branch_dict(b) for b in stats.unfinished],
    }


def audit_dict(report: AuditReport) -> dict:
    return {
        "ok": report.ok,
        "max_actions": report.max_actions,
        "merge": report.merge,
        "nodes": report.nodes,
        "incomplete": report.incomplete,
        "violations": [branch_dict(b) for b in report.violations],
    }


def stats_json(stats: ExplorationStats) -> str:
    return json.dumps(stats_dict(stats), indent=4, ensure_ascii=False) + "\n"


def stats_frame(stats: ExplorationStats) -> pd.DataFrame:
    """One row per measure, exact and decimal side by side."""
    measures = [
        ("completed", stats.completed),
        ("failed", stats.failed),
        ("running", stats.running),
        ("expected actions", stats.expected_actions),
    ]
    for row in stats.goals:
        measures.append((f"believed: {row.goal}", row.believed))
        if row.actual is not None:
            measures.append((f"actual: {row.goal}", row.actual))

    rows = [
        {
            "measure": name,
            "value": "" if value is None else rational_str(value),
            "decimal": "" if value is None else decimal_str(value),
        }
        for name, value in measures
    ]
    return pd.DataFrame(rows, columns=["measure", "value", "decimal"])


def write_stats_csv(stats: ExplorationStats, csv_file: Path) -> None:
    csv_file.parent.mkdir(parents=True, exist_ok=True)
    stats_frame(stats).to_csv(csv_file, index=False)
