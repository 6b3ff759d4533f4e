import unittest
from fractions import Fraction

from noesis.pylib.const import DATA_DIR
from noesis.pylib.engine import replay
from noesis.pylib.frontend.bat_parser import read_bat
from noesis.pylib.verifier import (
    ExploreSettings,
    audit,
    explore,
    path_probability,
    pick_merge,
)
from tests.setup import EQ1, FIRST_LOOP, GOTO, MOVE, NEAR_FAR, WALL_ROBOT, formula

MISREAD = read_bat(DATA_DIR / "move_misread_sonar.bat")


class TestVerifier(unittest.TestCase):
    def test_explore_01(self):
        """The first loop finishes within three actions with probability 6/25."""
        stats = explore(MOVE, FIRST_LOOP, 3)
        self.assertEqual(stats.completed, Fraction(6, 25))
        self.assertEqual(stats.total, 1)

    def test_explore_02(self):
        stats = explore(GOTO, NEAR_FAR, 2)
        self.assertEqual(stats.completed, 1)
        self.assertEqual(stats.failed, 0)
        self.assertEqual(stats.nodes, 3)
        self.assertEqual(stats.expected_actions, 2)
        self.assertEqual(stats.counterexamples, [])

    def test_explore_03(self):
        goal = formula("At = far", GOTO)
        stats = explore(GOTO, NEAR_FAR, 2, [goal])
        self.assertEqual(stats.goals[0].goal, "At = far")
        self.assertEqual(stats.goals[0].believed, 1)
        self.assertEqual(stats.goals[0].actual, 1)

    def test_explore_04(self):
        """Epistemic goals have no actual-world score."""
        goal = formula("bel(At = near) = 0", GOTO)
        stats = explore(GOTO, NEAR_FAR, 2, [goal])
        self.assertEqual(stats.goals[0].believed, 1)
        self.assertIsNone(stats.goals[0].actual)

    def test_explore_05(self):
        """Every merge mode gives the same numbers."""
        results = set()
        for merge in ("none", "exact", "support", "auto"):
            stats = explore(MOVE, FIRST_LOOP, 5, settings=ExploreSettings(merge=merge))
            results.add((stats.completed, stats.failed, stats.running))
        self.assertEqual(len(results), 1)

    def test_explore_06(self):
        stats = explore(GOTO, NEAR_FAR, 1)
        self.assertEqual(stats.completed, 0)
        self.assertEqual(stats.running, 1)
        self.assertEqual(stats.unfinished[0].reason, "action bound reached")

    def test_explore_07(self):
        stats = explore(MOVE, FIRST_LOOP, 8, settings=ExploreSettings(node_budget=5))
        self.assertTrue(stats.incomplete)
        self.assertGreater(stats.running, 0)

    def test_explore_08(self):
        """A worker pool does not change the result."""
        alone = explore(MOVE, FIRST_LOOP, 5)
        pooled = explore(MOVE, FIRST_LOOP, 5, settings=ExploreSettings(jobs=2))
        self.assertEqual(alone.completed, pooled.completed)
        self.assertEqual(alone.running, pooled.running)

    def test_explore_09(self):
        stats = explore(MOVE, FIRST_LOOP, 3, [formula("Loc <= 2")])
        self.assertEqual(stats.goals[0].believed, Fraction(6, 25))
        self.assertEqual(stats.goals[0].actual, Fraction(6, 25))

    def test_audit_01(self):
        """No knowledge or normalization violations on the wall robot."""
        report = audit(MOVE, WALL_ROBOT, 14)
        self.assertTrue(report.ok)

    def test_audit_02(self):
        """A sonar reading two metres short lets the robot leave the first loop early."""
        report = audit(MOVE, WALL_ROBOT, 3, nature=MISREAD)
        self.assertFalse(report.ok)
        found = [(", ".join(str(a) for a in v.path), v.reason) for v in report.violations]
        self.assertEqual(
            found,
            [
                ("sonar(1)", "inconsistent observation"),
                ("sonar(3), move(-1, -2), sonar(-1)", "inconsistent observation"),
                (
                    "sonar(3), move(-1, -1), sonar(0)",
                    "actual world outside the belief support",
                ),
                (
                    "sonar(3), move(-1, 0), sonar(1)",
                    "actual world outside the belief support",
                ),
                (
                    "sonar(3), move(-1, 0), sonar(1)",
                    "known exists x:Distance (Loc = x and x <= 2) "
                    "is false in the actual world {Loc=3}",
                ),
            ],
        )
        self.assertEqual(report.violations[-1].probability, Fraction(1, 20))

    def test_audit_03(self):
        """With its own sonar the robot never knows anything false."""
        report = audit(MOVE, WALL_ROBOT, 3, nature=MOVE)
        self.assertTrue(report.ok)

    def test_path_01(self):
        expected = Fraction(373248, 762939453125)
        self.assertEqual(path_probability(MOVE, WALL_ROBOT, EQ1), expected)

    def test_path_02(self):
        """Scripted probability matches the trace's own step probabilities."""
        trace = replay(MOVE, WALL_ROBOT, EQ1)
        self.assertEqual(path_probability(MOVE, WALL_ROBOT, EQ1), trace.probability())

    def test_merge_01(self):
        self.assertEqual(pick_merge("auto", WALL_ROBOT, []), "support")
        goal = formula("bel(Loc = 2) >= 1/2")
        self.assertEqual(pick_merge("auto", WALL_ROBOT, [goal]), "exact")
        self.assertEqual(pick_merge("none", WALL_ROBOT, [goal]), "none")

    def test_merge_02(self):
        with self.assertRaises(ValueError):
            pick_merge("sometimes", WALL_ROBOT, [])
