import unittest
from fractions import Fraction

from hypothesis import given
from hypothesis import strategies as st

from noesis.pylib.errors import NestedBeliefError, SortMismatchError, UnboundVariableError
from noesis.pylib.logic.formula import (
    FALSE,
    TRUE,
    And,
    Bel,
    Compare,
    Cond,
    Exists,
    Know,
    Not,
    Or,
    degree_of_belief,
    eval_epistemic,
    join,
)
from noesis.pylib.logic.term import Abs, BinOp, Const, FluentRef, Var
from tests.setup import MOVE, formula, loc, loc_belief

DISTANCE = MOVE.sorts["Distance"]
LOC = FluentRef("Loc", DISTANCE)
CHECKPOINT = loc_belief({1: Fraction(17, 241), 2: Fraction(216, 241), 3: Fraction(8, 241)})


def loc_is(value: int) -> Compare:
    return Compare("=", LOC, Const(value))


class TestFormula(unittest.TestCase):
    def test_formula_01(self):
        self.assertEqual(degree_of_belief(loc_is(2), CHECKPOINT), Fraction(216, 241))

    def test_formula_02(self):
        self.assertEqual(degree_of_belief(loc_is(3), CHECKPOINT), Fraction(8, 241))
        self.assertTrue(eval_epistemic(Bel(loc_is(3), ">", Fraction(0)), CHECKPOINT))

    def test_formula_03(self):
        near = formula("know(exists x:Distance (Loc = x and x <= 2))")
        self.assertFalse(eval_epistemic(near, CHECKPOINT))

    def test_formula_04(self):
        self.assertTrue(eval_epistemic(Bel(loc_is(2), ">=", Fraction(1, 2)), CHECKPOINT))

    def test_formula_05(self):
        """Know is belief with degree one."""
        belief = loc_belief({2: 1, 1: 1})
        self.assertTrue(eval_epistemic(Know(Compare("<=", LOC, Const(2))), belief))
        self.assertFalse(eval_epistemic(Know(loc_is(2)), belief))

    def test_formula_06(self):
        with self.assertRaises(NestedBeliefError):
            Bel(Know(loc_is(3)), ">=", Fraction(1, 2))

    def test_formula_07(self):
        x = Var("x", DISTANCE)
        phi = Exists(x, And((Compare("=", LOC, x), Compare("<=", x, Const(2)))))
        self.assertTrue(phi.holds(loc(2), {}))
        self.assertFalse(phi.holds(loc(3), {}))

    def test_formula_08(self):
        x = Var("x", DISTANCE)
        with self.assertRaises(UnboundVariableError):
            Compare("=", LOC, x).holds(loc(2), {})

    def test_formula_09(self):
        with self.assertRaises(SortMismatchError):
            Compare("=", Const(3), Const("near")).holds(None, {})

    def test_formula_10(self):
        self.assertEqual(Compare("=", Const(1), Const(1)).simplify(), TRUE)
        self.assertEqual(And((loc_is(2), Compare("<", Const(2), Const(1)))).simplify(), FALSE)
        self.assertEqual(Or((loc_is(2), FALSE)).simplify(), loc_is(2))

    def test_formula_11(self):
        self.assertEqual(join(And, []), TRUE)
        self.assertEqual(join(Or, []), FALSE)
        self.assertEqual(join(Or, [loc_is(1)]), loc_is(1))

    def test_formula_12(self):
        """The sonar likelihood: right 4/5, one off 1/10, otherwise 0."""
        z = Var("z", MOVE.sorts["Reading"])
        theta = Cond(
            (
                (Compare("=", z, LOC), Const(Fraction(4, 5))),
                (Compare("=", Abs(BinOp("-", z, LOC)), Const(1)), Const(Fraction(1, 10))),
            ),
            Const(0),
        )
        self.assertEqual(theta.evaluate(loc(3), {"z": 3}), Fraction(4, 5))
        self.assertEqual(theta.evaluate(loc(3), {"z": 4}), Fraction(1, 10))
        self.assertEqual(theta.evaluate(loc(3), {"z": 5}), 0)

    def test_formula_13(self):
        self.assertTrue(Know(loc_is(2)).is_support_determined())
        self.assertTrue(Bel(loc_is(2), ">", Fraction(0)).is_support_determined())
        self.assertFalse(Bel(loc_is(2), ">=", Fraction(1, 2)).is_support_determined())

    def test_formula_14(self):
        """Objective parts of a mixed guard are read as knowledge."""
        belief = loc_belief({2: 1, 3: 1})
        mixed = Or((loc_is(2), Bel(loc_is(3), ">=", Fraction(1, 2))))
        self.assertTrue(eval_epistemic(mixed, belief))
        self.assertFalse(eval_epistemic(Or((loc_is(2), loc_is(9))), belief))

    def test_formula_15(self):
        x = Var("x", DISTANCE)
        body = Compare("=", LOC, x)
        self.assertEqual(body.substitute({"x": Const(4)}), loc_is(4))
        bound = Exists(x, body)
        self.assertEqual(bound.substitute({"x": Const(4)}), bound)

    def test_formula_16(self):
        self.assertEqual(Not(loc_is(2)).fluents(), frozenset(["Loc"]))
        self.assertEqual(Exists(Var("x", DISTANCE), loc_is(2)).free_vars(), frozenset())


weights = st.dictionaries(
    st.integers(min_value=-5, max_value=20),
    st.integers(min_value=1, max_value=50),
    min_size=1,
    max_size=8,
)


class TestFormulaProperties(unittest.TestCase):
    @given(weights, st.integers(min_value=-5, max_value=20))
    def test_complement_01(self, raw, bound):
        """Degrees of a formula and its negation add up to one."""
        belief = loc_belief(raw)
        phi = Compare("<=", LOC, Const(bound))
        total = degree_of_belief(phi, belief) + degree_of_belief(Not(phi), belief)
        self.assertEqual(total, 1)

    @given(weights, st.integers(min_value=-5, max_value=20))
    def test_complement_02(self, raw, value):
        """Knowing a formula rules out believing its negation."""
        belief = loc_belief(raw)
        phi = loc_is(value)
        if eval_epistemic(Know(phi), belief):
            self.assertEqual(degree_of_belief(Not(phi), belief), 0)
