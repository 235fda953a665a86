from unittest import TestCase

from hypothesis import given

from manifest_verifier.tests.property_settings import examples

from ..exceptions import IRSyntaxError
from ..paths import Path
from ..serialization import parse_expr, parse_pred, print_expr, print_pred
from ..syntax import (
    SKIP,
    Cp,
    CreateFile,
    DoesNotExist,
    If,
    IsFile,
    Mkdir,
    Not,
    Seq,
    idemdir,
)
from .strategies import exprs


class ParseExprTests(TestCase):
    def test_parse(self):
        expr = parse_expr(
            '(seq (mkdir /a) (if (not (file? /a/f)) (create /a/f "x") skip))'
        )

        self.assertEqual(
            expr,
            Seq(
                Mkdir(Path.parse("/a")),
                If(
                    Not(IsFile(Path.parse("/a/f"))),
                    CreateFile(Path.parse("/a/f"), "x"),
                    SKIP,
                ),
            ),
        )

    def test_idemdir_text(self):
        self.assertEqual(
            print_expr(idemdir(Path.parse("/usr"))),
            "(if (dne /usr) (mkdir /usr) (if (file? /usr) error skip))",
        )

    def test_quoted_paths_and_contents(self):
        expr = Cp(Path.parse("/my dir/f"), Path.parse("/out"))

        text = print_expr(expr)

        self.assertEqual(text, '(cp "/my dir/f" /out)')
        self.assertEqual(parse_expr(text), expr)
        self.assertEqual(
            print_expr(CreateFile(Path.parse("/f"), 'say "hi"\n')),
            '(create /f "say \\"hi\\"\\n")',
        )

    def test_malformed(self):
        cases = [
            "(mkdir)",
            "(mkdir a/b)",
            "(create /f x)",
            "(seq skip)",
            "(if true skip)",
            "(frobnicate /a)",
            "(mkdir /a",
            "skip skip",
        ]
        for text in cases:
            with self.subTest(text=text), self.assertRaises(IRSyntaxError):
                parse_expr(text)

    def test_predicates(self):
        self.assertEqual(parse_pred("(dne /a)"), DoesNotExist(Path.parse("/a")))
        text = "(and true (or false (dir? /)))"
        self.assertEqual(print_pred(parse_pred(text)), text)
        with self.assertRaises(IRSyntaxError):
            parse_pred("(dne /a /b)")

    @given(exprs())
    @examples(acceptance=1_000)
    def test_printing_is_canonical(self, expr):
        self.assertEqual(parse_expr(print_expr(expr)), expr)
