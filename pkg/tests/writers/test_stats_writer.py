import json
import tempfile
import unittest
from fractions import Fraction
from pathlib import Path

from noesis.pylib.action_theory import GroundAction
from noesis.pylib.verifier import AuditReport, Branch, explore
from noesis.pylib.writers.stats_writer import (
    audit_dict,
    branch_dict,
    stats_frame,
    stats_json,
    write_stats_csv,
)
from tests.setup import FIRST_LOOP, GOTO, MOVE, NEAR_FAR, formula


class TestStatsWriter(unittest.TestCase):
    def test_branch_01(self):
        sonar = GroundAction("sonar", (), (1,), (False,))
        branch = Branch((sonar,), Fraction(1, 8), "test failed")
        self.assertEqual(
            branch_dict(branch),
            {
                "path": ["sonar(1)"],
                "probability": {"value": "1/8", "decimal": "0.125000"},
                "reason": "test failed",
            },
        )

    def test_stats_json_01(self):
        data = json.loads(stats_json(explore(MOVE, FIRST_LOOP, 3)))
        self.assertEqual(data["completed"], {"value": "6/25", "decimal": "0.240000"})
        self.assertEqual(data["max_actions"], 3)
        self.assertEqual(data["goals"], [])

    def test_stats_json_02(self):
        """Epistemic goals have a null actual score."""
        stats = explore(GOTO, NEAR_FAR, 2, [formula("know(At = far)", GOTO)])
        data = json.loads(stats_json(stats))
        self.assertIsNone(data["goals"][0]["actual"])
        self.assertEqual(data["goals"][0]["believed"]["value"], "1/1")

    def test_stats_frame_01(self):
        stats = explore(GOTO, NEAR_FAR, 2, [formula("At = far", GOTO)])
        df = stats_frame(stats)
        self.assertEqual(
            df["measure"].tolist(),
            [
                "completed",
                "failed",
                "running",
                "expected actions",
                "believed: At = far",
                "actual: At = far",
            ],
        )
        self.assertEqual(df["value"].tolist(), ["1/1", "0/1", "0/1", "2/1", "1/1", "1/1"])

    def test_stats_frame_02(self):
        stats = explore(GOTO, NEAR_FAR, 1)
        df = stats_frame(stats)
        row = df.loc[df["measure"] == "expected actions"].iloc[0]
        self.assertEqual(row["value"], "")

    def test_stats_csv_01(self):
        stats = explore(MOVE, FIRST_LOOP, 3)
        with tempfile.TemporaryDirectory() as temp_dir:
            csv_file = Path(temp_dir) / "stats.csv"
            write_stats_csv(stats, csv_file)
            lines = csv_file.read_text().splitlines()
        self.assertEqual(lines[0], "measure,value,decimal")
        self.assertEqual(lines[1], "completed,6/25,0.240000")

    def test_audit_dict_01(self):
        report = AuditReport([], nodes=9, max_actions=4, merge="support")
        self.assertEqual(
            audit_dict(report),
            {
                "ok": True,
                "max_actions": 4,
                "merge": "support",
                "nodes": 9,
                "incomplete": False,
                "violations": [],
            },
        )
