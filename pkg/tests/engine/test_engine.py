import unittest
from fractions import Fraction

from noesis.pylib.engine import (
    Advance,
    Config,
    Done,
    Failure,
    RunSettings,
    replay,
    run,
    step,
)
from noesis.pylib.frontend.program_parser import parse_program
from noesis.pylib.oracle import NatureScript, ScriptedOracle, SeededOracle
from noesis.pylib.trace import Status
from noesis.pylib.writers.trace_writer import emit_trace
from tests.setup import (
    EQ1,
    EQ1_EXTENDED,
    GOTO,
    MOVE,
    NEAR_FAR,
    WALL_ROBOT,
    Z_H,
    Z_L,
    loc,
    loc_belief,
)


def script(*entries) -> ScriptedOracle:
    return ScriptedOracle(NatureScript(tuple((e,) for e in entries)))


def program(text: str, bat=MOVE):
    return parse_program(text, bat)


class TestEngine(unittest.TestCase):
    def test_step_01(self):
        config = Config(program("sonar(); move(-1);"), loc_belief({3: 1}), loc(3))
        result = step(config, script(3), MOVE, RunSettings())
        self.assertIsInstance(result, Advance)
        self.assertEqual(str(result.event.actual), "sonar(3)")
        self.assertEqual(str(result.event.observed), "sonar(3)")
        self.assertEqual(result.config.belief, loc_belief({3: 1}))
        self.assertEqual(result.config.program, program("move(-1);"))

    def test_step_02(self):
        config = Config(program("move(-1);"), loc_belief({3: 1}), loc(3))
        result = step(config, script(0), MOVE, RunSettings())
        self.assertEqual(result.config.actual, loc(3))
        expected = loc_belief({1: Fraction(1, 5), 2: Fraction(3, 5), 3: Fraction(1, 5)})
        self.assertEqual(result.config.belief, expected)
        self.assertEqual(str(result.event.observed), "move(-1, _)")
        self.assertEqual(result.event.probability, Fraction(1, 5))

    def test_step_03(self):
        """Loc <= 2 is not known at 3, so the loop body runs."""
        text = "while not know(Loc <= 2) { move(-1); sonar(); }"
        config = Config(program(text), loc_belief({3: 1}), loc(3))
        result = step(config, script(-1), MOVE, RunSettings())
        self.assertIsInstance(result, Advance)
        self.assertEqual(result.event.issued.name, "move")

    def test_step_04(self):
        config = Config(program("test know(Loc = 3);"), loc_belief({3: 1}), loc(3))
        self.assertIsInstance(step(config, script(), MOVE, RunSettings()), Done)

    def test_step_05(self):
        config = Config(program("test Loc = 2;"), loc_belief({3: 1}), loc(3))
        result = step(config, script(), MOVE, RunSettings())
        self.assertIsInstance(result, Failure)
        self.assertEqual(result.reason, "test failed")

    def test_step_06(self):
        config = Config(program("move(2);"), loc_belief({3: 1}), loc(3))
        result = step(config, script(2), MOVE, RunSettings())
        self.assertEqual(result.reason, "precondition violated")

    def test_step_07(self):
        config = Config(program("while Loc = 3 { sonar(); }"), loc_belief({3: 1}), loc(3))
        result = step(config, script(3), MOVE, RunSettings(strict_guards=True))
        self.assertEqual(result.reason, "objective guard in strict mode")

    def test_run_01(self):
        trace = replay(MOVE, WALL_ROBOT, EQ1)
        self.assertEqual(emit_trace(trace, "text"), Z_L)
        self.assertEqual(len(trace.steps), 17)

    def test_run_02(self):
        """The first loop moves three times and stops right after sonar(1)."""
        trace = replay(MOVE, WALL_ROBOT, EQ1)
        actions = [str(a) for a in trace.actions()]
        self.assertEqual(sum(1 for a in actions if a.startswith("move(-1")), 3)
        self.assertEqual(actions[6:8], ["sonar(1)", "move(1, 1)"])

    def test_run_03(self):
        """z_l ends at Loc = 5, where the robot cannot know it is past 5 m."""
        trace = replay(MOVE, WALL_ROBOT, EQ1)
        self.assertEqual(trace.status, Status.FAILED)
        self.assertEqual(trace.reason, "script underrun")

    def test_run_04(self):
        trace = replay(MOVE, WALL_ROBOT, EQ1_EXTENDED)
        self.assertEqual(trace.status, Status.COMPLETED)
        self.assertEqual(len(trace.steps), 19)
        self.assertEqual(trace.unused, 0)

    def test_run_05(self):
        trace, _ = run(GOTO, NEAR_FAR, SeededOracle(11))
        self.assertTrue(trace.completed)
        self.assertEqual(emit_trace(trace, "text"), Z_H)

    def test_run_06(self):
        trace, config = run(MOVE, program("test know(Loc = 3);"), SeededOracle(5))
        self.assertTrue(trace.completed)
        self.assertEqual(trace.steps, [])
        self.assertEqual(config.actual, loc(3))

    def test_run_07(self):
        trace = replay(MOVE, program("sonar(); move(-1);"), NatureScript(((3,), (7,))))
        self.assertEqual(trace.status, Status.FAILED)
        self.assertEqual(trace.reason, "script mismatch")
        self.assertEqual(len(trace.steps), 1)

    def test_run_08(self):
        trace, _ = run(MOVE, WALL_ROBOT, SeededOracle(3), RunSettings(max_steps=4))
        self.assertEqual(trace.status, Status.STEP_LIMIT)
        self.assertEqual(len(trace.steps), 4)

    def test_run_09(self):
        """The same seed gives byte-identical traces."""
        first, _ = run(MOVE, WALL_ROBOT, SeededOracle(42))
        second, _ = run(MOVE, WALL_ROBOT, SeededOracle(42))
        self.assertEqual(emit_trace(first, "json"), emit_trace(second, "json"))

    def test_run_10(self):
        """Every seeded run ends with the robot really past 5 m."""
        for seed in range(20):
            trace, config = run(MOVE, WALL_ROBOT, SeededOracle(seed))
            self.assertTrue(trace.completed, f"seed {seed}")
            self.assertGreater(config.actual["Loc"], 5, f"seed {seed}")

    def test_run_11(self):
        settings = RunSettings(snapshots=True)
        trace, _ = run(MOVE, WALL_ROBOT, SeededOracle(8), settings)
        actual = loc(3)
        for event in trace.steps:
            actual = MOVE.progress(actual, event.actual)
            self.assertGreater(event.belief.weight(actual), 0)

    def test_run_12(self):
        strict = RunSettings(strict_poss=True)
        trace, _ = run(MOVE, program("move(1);"), SeededOracle(1), strict)
        self.assertTrue(trace.completed)
        trace, _ = run(MOVE, program("move(2);"), SeededOracle(1), strict)
        self.assertEqual(trace.reason, "precondition not known")
