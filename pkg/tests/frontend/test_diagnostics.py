import unittest

from noesis.pylib.frontend.diagnostics import (
    RED,
    RESET,
    Diagnostic,
    Severity,
    SourceSpan,
    error,
    span_at,
)


class TestDiagnostics(unittest.TestCase):
    def test_span_01(self):
        self.assertEqual(span_at("ab\ncd", 4), SourceSpan("<input>", 2, 2, 1))

    def test_span_02(self):
        """Positions past the end are clamped."""
        self.assertEqual(span_at("ab", 99).line, 1)

    def test_render_01(self):
        diagnostic = Diagnostic(Severity.ERROR, "bad", SourceSpan("f.prog", 2, 3, 2))
        self.assertEqual(
            diagnostic.render("ab\ncdefg\n"),
            "f.prog:2:3: error: bad\n    cdefg\n      ^^",
        )

    def test_render_02(self):
        diagnostic = Diagnostic(Severity.WARNING, "odd", SourceSpan("f", 1, 1), hint="look")
        self.assertEqual(diagnostic.render(), "f:1:1: warning: odd\n    hint: look")

    def test_render_03(self):
        diagnostic = error("bad", "x = 1", 4, "f.prog")
        self.assertIn(f"{RED}error{RESET}", diagnostic.render(color=True))
        self.assertNotIn(RED, diagnostic.render())
