from fractions import Fraction
from pathlib import Path

# ---------------------
# Useful locations

ROOT_DIR = Path(__file__).resolve().parent.parent.parent

DATA_DIR = ROOT_DIR / "data"
GOLDEN_DIR = DATA_DIR / "golden"
TEMPLATE_DIR = Path(__file__).parent / "writers" / "templates"

# ---------------------
# Engine limits

MAX_STEPS = 10_000  # Primitive actions per run; tests and guards are free
MAX_SILENT_STEPS = 100_000  # Tests/branches between two actions before we give up

# ---------------------
# Verifier limits

NODE_BUDGET = 1_000_000
MAX_COUNTEREXAMPLES = 10
MERGE_MODES = ("auto", "exact", "support", "none")

# ---------------------
# Refinement checking

DEFAULT_DEPTH = 30
DEFAULT_HL_HORIZON = 2
DEFAULT_EPSILON = Fraction(1, 100)

# ---------------------
# File formats

TRACE_FORMAT_VERSION = 1
DECIMAL_PLACES = 6

BAT_SUFFIX = ".bat"
PROGRAM_SUFFIX = ".prog"
MAPPING_SUFFIX = ".map"
NATURE_SUFFIX = ".nature"

COLOR_ENV = "NOESIS_COLOR"
