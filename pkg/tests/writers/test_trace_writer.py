import json
import tempfile
import unittest
from pathlib import Path

from noesis.pylib.const import DATA_DIR
from noesis.pylib.engine import RunSettings, replay, run
from noesis.pylib.frontend.nature_script import read_script
from noesis.pylib.oracle import SeededOracle
from noesis.pylib.trace import Trace
from noesis.pylib.util import to_rational
from noesis.pylib.writers.trace_writer import emit_trace, trace_dict, write_trace
from tests.setup import EQ1, GOTO, MOVE, NEAR_FAR, PREFIX, WALL_ROBOT

PREFIX_SCRIPT = read_script(DATA_DIR / "prefix.nature")


class TestTraceWriter(unittest.TestCase):
    def test_trace_writer_01(self):
        self.assertEqual(emit_trace(Trace(), "text"), "⟨⟩\n".encode())

    def test_trace_writer_02(self):
        trace, _ = run(GOTO, NEAR_FAR, SeededOracle(3))
        data = json.loads(emit_trace(trace, "json"))
        self.assertEqual(data["format_version"], 1)
        self.assertEqual(data["bat_digest"], GOTO.digest)
        self.assertEqual(data["oracle"], {"seed": 3})
        self.assertEqual(data["status"], "completed")
        self.assertEqual(
            data["steps"][1],
            {"i": 2, "issued": "goto(far)", "actual": "goto(far)", "observed": "goto(far)"},
        )

    def test_trace_writer_03(self):
        """Hidden outcomes show up as _ in what the agent observed."""
        trace = replay(MOVE, PREFIX, PREFIX_SCRIPT)
        step = trace_dict(trace)["steps"][1]
        self.assertEqual(step["issued"], "move(-1)")
        self.assertEqual(step["actual"], "move(-1, 0)")
        self.assertEqual(step["observed"], "move(-1, _)")

    def test_trace_writer_04(self):
        trace, _ = run(MOVE, WALL_ROBOT, SeededOracle(0), RunSettings(snapshots=True))
        first = trace_dict(trace)["steps"][0]
        self.assertIn("belief", first)
        self.assertEqual(sum(to_rational(r["weight"]) for r in first["belief"]), 1)

    def test_trace_writer_05(self):
        trace = replay(MOVE, WALL_ROBOT, EQ1)
        data = trace_dict(trace)
        self.assertEqual(data["status"], "failed")
        self.assertEqual(data["reason"], "script underrun")

    def test_trace_writer_06(self):
        with self.assertRaises(ValueError):
            emit_trace(Trace(), "yaml")

    def test_trace_writer_07(self):
        trace, _ = run(GOTO, NEAR_FAR, SeededOracle(3))
        with tempfile.TemporaryDirectory() as temp_dir:
            path = Path(temp_dir) / "out" / "trace.json"
            write_trace(trace, path)
            self.assertEqual(path.read_bytes(), emit_trace(trace, "json"))
