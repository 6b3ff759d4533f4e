"""Refinement and audit reports: text through Jinja2 templates, JSON, and CSV."""

import json
from pathlib import Path

import jinja2
import pandas as pd

from noesis.pylib import const
from noesis.pylib.abstraction import ActionCheck, AtomCheck, RefinementReport
from noesis.pylib.util import decimal_str, rational_json, rational_str
from noesis.pylib.verifier import AuditReport, Branch
from noesis.pylib.writers.stats_writer import audit_dict, branch_dict

CHECK_COLUMNS = [
    "sequence",
    "ok",
    "starts",
    "termination",
    "min_termination",
    "agreement",
    "actual_disagreement",
    "counterexample",
]


def environment() -> jinja2.Environment:
    return jinja2.Environment(
        loader=jinja2.FileSystemLoader(const.TEMPLATE_DIR),
        autoescape=False,
        keep_trailing_newline=True,
        trim_blocks=True,
        lstrip_blocks=True,
    )


def exact(value) -> str:
    return f"{rational_str(value)} ({decimal_str(value)})"


def branch_text(branch: Branch) -> str:
    path = ", ".join(str(a) for a in branch.path)
    probability = rational_str(branch.probability)
    return f"{branch.reason} after ⟨{path}⟩ with probability {probability}"


def sequence_text(check: ActionCheck) -> str:
    return "⟨" + ", ".join(check.sequence) + "⟩"


def expected_text(atom: AtomCheck) -> str:
    if atom.expected is None:
        return "undecided"
    return "known true" if atom.expected else "known false"


def atom_rows(report: RefinementReport) -> list[dict]:
    return [
        {
            "mark": "+" if a.ok else "x",
            "fluent": a.fluent,
            "value": a.value,
            "expected": expected_text(a),
            "degree": rational_str(a.degree),
            "formula": a.formula,
        }
        for a in report.initial
    ]


def check_rows(report: RefinementReport) -> list[dict]:
    return [
        {
            "mark": "+" if c.ok else "x",
            "sequence": sequence_text(c),
            "starts": c.starts,
            "termination": exact(c.termination),
            "min_termination": rational_str(c.min_termination),
            "agreement": exact(c.agreement),
            "actual_disagreement": rational_str(c.actual_disagreement),
            "counterexample": branch_text(c.counterexample) if c.counterexample else "",
        }
        for c in report.actions
    ]


def refinement_text(report: RefinementReport) -> str:
    template = environment().get_template("refinement.txt")
    return template.render(
        report=report,
        epsilon=rational_str(report.epsilon),
        atoms=atom_rows(report),
        checks=check_rows(report),
    )


def refinement_dict(report: RefinementReport) -> dict:
    return {
        "ok": report.ok,
        "depth": report.depth,
        "hl_horizon": report.hl_horizon,
        "epsilon": rational_str(report.epsilon),
        "incomplete": report.incomplete,
        "initial": [
            {
                "fluent": a.fluent,
                "value": a.value,
                "expected": a.expected,
                "formula": a.formula,
                "degree": rational_json(a.degree),
                "ok": a.ok,
            }
            for a in report.initial
        ],
        "actions": [
            {
                "sequence": list(c.sequence),
                "starts": c.starts,
                "termination": rational_json(c.termination),
                "min_termination": rational_json(c.min_termination),
                "agreement": rational_json(c.agreement),
                "actual_disagreement": rational_json(c.actual_disagreement),
                "counterexample": (
                    branch_dict(c.counterexample) if c.counterexample else None
                ),
                "ok": c.ok,
            }
            for c in report.actions
        ],
    }


def refinement_json(report: RefinementReport) -> str:
    return json.dumps(refinement_dict(report), indent=4, ensure_ascii=False) + "\n"


def write_refinement_csv(report: RefinementReport, csv_file: Path) -> None:
    rows = check_rows(report)
    for row, check in zip(rows, report.actions, strict=True):
        row["ok"] = check.ok
        row["termination"] = rational_str(check.termination)
        row["agreement"] = rational_str(check.agreement)
    df = pd.DataFrame(rows, columns=CHECK_COLUMNS)
    csv_file.parent.mkdir(parents=True, exist_ok=True)
    df.to_csv(csv_file, index=False)


def audit_text(report: AuditReport) -> str:
    template = environment().get_template("audit.txt")
    return template.render(
        report=report,
        violations=[branch_text(b) for b in report.violations],
    )


def audit_report_json(report: AuditReport) -> str:
    return json.dumps(audit_dict(report), indent=4, ensure_ascii=False) + "\n"
