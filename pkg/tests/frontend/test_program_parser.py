import unittest

from noesis.pylib.errors import ParseError
from noesis.pylib.frontend.printer import print_formula, print_program
from noesis.pylib.frontend.program_parser import parse_formula, parse_program
from noesis.pylib.logic.formula import Know, Not
from noesis.pylib.program import Act, Seq, While
from tests.setup import (
    FIRST_LOOP,
    GOTO,
    MOVE,
    NEAR_FAR,
    PREFIX,
    WALL_ROBOT,
    loc,
    loc_belief,
)


def message(text: str, bat=MOVE) -> str:
    try:
        parse_program(text, bat)
    except ParseError as err:
        return err.diagnostics[0].message
    return ""


class TestProgramParser(unittest.TestCase):
    def test_program_parser_01(self):
        self.assertIsInstance(WALL_ROBOT, Seq)
        self.assertIsInstance(WALL_ROBOT.first, Act)
        self.assertEqual(WALL_ROBOT.first.name, "sonar")

    def test_program_parser_02(self):
        loop = parse_program("while not know(Loc <= 2) { move(-1); sonar(); }", MOVE)
        self.assertIsInstance(loop, While)
        self.assertIsInstance(loop.cond, Not)
        self.assertIsInstance(loop.cond.body, Know)

    def test_program_parser_03(self):
        self.assertEqual(parse_program("", MOVE), parse_program("# nothing\n", MOVE))

    def test_program_parser_04(self):
        text = "while know(know(Loc <= 2)) { sonar(); }"
        self.assertEqual(message(text), "nested epistemic operator")

    def test_program_parser_05(self):
        self.assertEqual(message("fly();"), "unknown action fly")

    def test_program_parser_06(self):
        """Hidden parameters are nature's, so the agent passes only x."""
        self.assertEqual(message("move(1, 0);"), "move takes 1 argument(s), got 2")

    def test_program_parser_07(self):
        self.assertEqual(message("move(3);"), "x = 3 is outside the carrier of sort Step")

    def test_program_parser_08(self):
        self.assertEqual(message("test Foo = 1;"), "unknown symbol Foo")

    def test_program_parser_09(self):
        self.assertEqual(
            message("test bel(Loc = 3) != 1/2;"), "bel() cannot be compared with !="
        )

    def test_program_parser_10(self):
        text = "sonar();\nwhile Loc <= 2 { sonar() }\n"
        with self.assertRaises(ParseError) as context:
            parse_program(text, MOVE)
        diagnostic = context.exception.diagnostics[0]
        self.assertTrue(diagnostic.message.startswith("syntax error"))
        self.assertEqual(diagnostic.span.line, 2)

    def test_program_parser_11(self):
        self.assertEqual(message("goto(near);"), "unknown action goto")
        self.assertEqual(message("test At = middle;", GOTO), "unknown symbol middle")

    def test_program_parser_12(self):
        """Printed programs parse back to themselves."""
        for program, bat in (
            (WALL_ROBOT, MOVE),
            (FIRST_LOOP, MOVE),
            (PREFIX, MOVE),
            (NEAR_FAR, GOTO),
        ):
            self.assertEqual(parse_program(print_program(program), bat), program)


class TestFormulaParser(unittest.TestCase):
    def test_formula_parser_01(self):
        phi = parse_formula("exists x:Distance (Loc = x and x <= 2)", MOVE)
        self.assertTrue(phi.holds(loc(2), {}))
        self.assertFalse(phi.holds(loc(3), {}))

    def test_formula_parser_02(self):
        phi = parse_formula("bel(Loc = 2) >= 1/2", MOVE)
        self.assertTrue(phi.believed(loc_belief({2: 3, 3: 1}), {}))
        self.assertFalse(phi.believed(loc_belief({2: 1, 3: 3}), {}))

    def test_formula_parser_03(self):
        with self.assertRaises(ParseError) as context:
            parse_formula("Loc = y", MOVE)
        self.assertEqual(context.exception.diagnostics[0].message, "unknown symbol y")

    def test_formula_parser_04(self):
        for text in ("Loc + 1 = 3 or not (Loc = 2)", "know(Loc = 3)", "bel(Loc = 3) < 1/4"):
            phi = parse_formula(text, MOVE)
            self.assertEqual(parse_formula(print_formula(phi), MOVE), phi)
