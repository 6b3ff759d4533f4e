import unittest
from collections import defaultdict
from fractions import Fraction

from hypothesis import given
from hypothesis import strategies as st

from noesis.pylib.action_theory import IssuedAction, Observation, observation_of
from noesis.pylib.belief import normalize, update
from noesis.pylib.errors import InconsistentObservationError, NormalizationError
from tests.setup import MOVE, loc, loc_belief

# z_l as (action, agent argument, nature's choice)
Z_L = [
    ("sonar", None, 3),
    ("move", -1, 0),
    ("sonar", None, 3),
    ("move", -1, -1),
    ("sonar", None, 2),
    ("move", -1, -1),
    ("sonar", None, 1),
    ("move", 1, 1),
    ("sonar", None, 3),
    ("move", 1, 1),
    ("sonar", None, 2),
    ("move", 1, 1),
    ("sonar", None, 4),
    ("move", 1, 0),
    ("sonar", None, 4),
    ("move", 1, 1),
    ("sonar", None, 6),
]


def observed(name, x, value) -> Observation:
    if name == "move":
        return Observation("move", (x,), (None,))
    return Observation("sonar", (), (value,))


def theta(u, v, right, off) -> Fraction:
    if u == v:
        return right
    if abs(u - v) == 1:
        return off
    return Fraction(0)


def joint(prefix) -> dict[int, Fraction]:
    """Enumerate every hidden history from Loc = 3 and condition on what was seen."""
    histories = {(3,): Fraction(1)}  # Loc after each step -> probability
    for name, x, value in prefix:
        extended = defaultdict(Fraction)
        for path, p in histories.items():
            here = path[-1]
            if name == "sonar":
                extended[(*path, here)] += p * theta(value, here, Fraction(4, 5), Fraction(1, 10))
            else:
                for y in (x - 1, x, x + 1):
                    extended[(*path, here + y)] += p * theta(x, y, Fraction(3, 5), Fraction(1, 5))
        histories = {k: v for k, v in extended.items() if v}

    final = defaultdict(Fraction)
    for path, p in histories.items():
        final[path[-1]] += p
    total = sum(final.values())
    return {k: v / total for k, v in final.items()}


class TestBelief(unittest.TestCase):
    def test_update_01(self):
        belief = update(loc_belief({3: 1}), Observation("move", (-1,), (None,)), MOVE)
        self.assertEqual(
            belief, loc_belief({1: Fraction(1, 5), 2: Fraction(3, 5), 3: Fraction(1, 5)})
        )

    def test_update_02(self):
        before = loc_belief({1: Fraction(1, 5), 2: Fraction(3, 5), 3: Fraction(1, 5)})
        belief = update(before, Observation("sonar", (), (3,)), MOVE)
        self.assertEqual(belief, loc_belief({2: Fraction(3, 11), 3: Fraction(8, 11)}))

    def test_update_03(self):
        belief = update(loc_belief({3: 1}), Observation("sonar", (), (3,)), MOVE)
        self.assertEqual(belief, loc_belief({3: 1}))

    def test_update_04(self):
        """The belief after the first five actions of z_l."""
        belief = MOVE.initial_belief
        for step in Z_L[:5]:
            belief = update(belief, observed(*step), MOVE)
        expected = {1: Fraction(17, 241), 2: Fraction(216, 241), 3: Fraction(8, 241)}
        self.assertEqual(belief, loc_belief(expected))
        self.assertEqual(belief.weight(loc(3)), Fraction(8, 241))

    def test_update_05(self):
        with self.assertRaises(InconsistentObservationError):
            update(loc_belief({3: 1}), Observation("sonar", (), (10,)), MOVE)

    def test_update_06(self):
        """Filtering agrees with joint enumeration on every prefix of z_l."""
        belief = MOVE.initial_belief
        for i, step in enumerate(Z_L, start=1):
            belief = update(belief, observed(*step), MOVE)
            self.assertEqual(belief, loc_belief(joint(Z_L[:i])), f"after {i} action(s)")

    def test_normalize_01(self):
        belief = normalize([(loc(2), Fraction(3, 50)), (loc(3), Fraction(8, 50))])
        self.assertEqual(belief, loc_belief({2: Fraction(3, 11), 3: Fraction(8, 11)}))

    def test_normalize_02(self):
        self.assertEqual(normalize([(loc(3), 7)]).weight(loc(3)), 1)

    def test_normalize_03(self):
        belief = normalize([(loc(2), Fraction(1, 2)), (loc(2), Fraction(1, 2))])
        self.assertEqual(len(belief), 1)
        self.assertEqual(belief.weight(loc(2)), 1)

    def test_normalize_04(self):
        with self.assertRaises(NormalizationError):
            normalize([(loc(2), 0)])

    def test_normalize_05(self):
        belief = normalize([(loc(2), 0), (loc(3), 1)])
        self.assertEqual(belief.support(), frozenset([loc(3)]))

    def test_snapshot_01(self):
        belief = loc_belief({2: 3, 3: 8})
        self.assertEqual(
            belief.snapshot(),
            [
                {"world": {"Loc": 2}, "weight": "3/11"},
                {"world": {"Loc": 3}, "weight": "8/11"},
            ],
        )


weights = st.dictionaries(
    st.integers(min_value=-3, max_value=18),
    st.integers(min_value=1, max_value=20),
    min_size=1,
    max_size=6,
)


class TestBeliefProperties(unittest.TestCase):
    @given(st.lists(st.tuples(st.integers(0, 10), st.integers(1, 9)), min_size=1), st.randoms())
    def test_canonical_01(self, raw, rnd):
        """Permuting the input gives the same belief state."""
        entries = [(loc(k), Fraction(w)) for k, w in raw]
        shuffled = list(entries)
        rnd.shuffle(shuffled)
        self.assertEqual(normalize(entries), normalize(shuffled))

    @given(weights, st.sampled_from([-1, 1]))
    def test_normalized_01(self, raw, x):
        belief = update(loc_belief(raw), Observation("move", (x,), (None,)), MOVE)
        self.assertTrue(belief.is_normalized())

    @given(weights, st.data())
    def test_accuracy_01(self, raw, data):
        """The actual successor world keeps positive weight."""
        belief = loc_belief(raw)
        actual = data.draw(st.sampled_from(sorted(raw)))
        issued = data.draw(st.sampled_from([IssuedAction("move", (-1,)), IssuedAction("sonar")]))
        possible = [
            a for a in MOVE.outcomes(issued) if MOVE.likelihood(loc(actual), a) > 0
        ]
        action = data.draw(st.sampled_from(possible))
        after = update(belief, observation_of(action), MOVE)
        self.assertGreater(after.weight(MOVE.progress(loc(actual), action)), 0)
