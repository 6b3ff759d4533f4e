import unittest

from noesis.pylib.engine import RunSettings, replay, run
from noesis.pylib.errors import ParseError
from noesis.pylib.frontend.trace_reader import decode_action, parse_trace
from noesis.pylib.oracle import SeededOracle
from noesis.pylib.trace import Status
from noesis.pylib.writers.trace_writer import emit_trace
from tests.setup import EQ1, GOTO, MOVE, NEAR_FAR, WALL_ROBOT


def reread(trace):
    return parse_trace(emit_trace(trace, "json").decode("utf-8"))


class TestTraceReader(unittest.TestCase):
    def test_decode_action_01(self):
        self.assertEqual(decode_action("move(-1, _)"), ("move", (-1, None)))
        self.assertEqual(decode_action("goto(near)"), ("goto", ("near",)))
        self.assertEqual(decode_action("sonar()"), ("sonar", ()))

    def test_decode_action_02(self):
        with self.assertRaises(ValueError):
            decode_action("move -1")

    def test_trace_reader_01(self):
        trace, _ = run(MOVE, WALL_ROBOT, SeededOracle(42), RunSettings(snapshots=True))
        self.assertEqual(reread(trace), trace)

    def test_trace_reader_02(self):
        trace, _ = run(GOTO, NEAR_FAR, SeededOracle(1))
        self.assertEqual(reread(trace), trace)

    def test_trace_reader_03(self):
        """A failed replay keeps its status and reason."""
        trace = replay(MOVE, WALL_ROBOT, EQ1)
        again = reread(trace)
        self.assertEqual(again.status, Status.FAILED)
        self.assertEqual(again.reason, "script underrun")
        self.assertEqual(emit_trace(again, "json"), emit_trace(trace, "json"))

    def test_trace_reader_04(self):
        with self.assertRaises(ParseError) as context:
            parse_trace('{"steps": [', "t.json")
        message = context.exception.diagnostics[0].message
        self.assertTrue(message.startswith("bad trace JSON"))

    def test_trace_reader_05(self):
        with self.assertRaises(ParseError) as context:
            parse_trace('{"steps": [], "status": "lost"}')
        message = context.exception.diagnostics[0].message
        self.assertTrue(message.startswith("malformed trace"))
