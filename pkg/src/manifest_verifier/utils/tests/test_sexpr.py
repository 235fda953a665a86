from unittest import TestCase

from ..sexpr import SExprSyntaxError, String, Symbol, quote, read_all, read_one


class ReadTests(TestCase):
    def test_nested_lists(self):
        self.assertEqual(
            read_one("(model (define-fun in_0 () Node dir))"),
            (
                Symbol("model"),
                (
                    Symbol("define-fun"),
                    Symbol("in_0"),
                    (),
                    Symbol("Node"),
                    Symbol("dir"),
                ),
            ),
        )

    def test_strings(self):
        for text, expected in [
            ('"syntax on"', "syntax on"),
            ('"say ""hi"""', 'say "hi"'),
            (r'"a\nb"', "a\nb"),
            ('"(not a list)"', "(not a list)"),
        ]:
            with self.subTest(text=text):
                self.assertEqual(read_one(text), String(expected))

    def test_quoted_symbol(self):
        self.assertEqual(read_one("|a b|"), Symbol("a b"))

    def test_comments_and_several_expressions(self):
        nodes = read_all("sat ; the answer\n(x)\n")

        self.assertEqual(nodes, [Symbol("sat"), (Symbol("x"),)])

    def test_syntax_errors(self):
        for text in ("(a", "a)", '"open', "|open", "a b", ""):
            with self.subTest(text=text):
                with self.assertRaises(SExprSyntaxError):
                    read_one(text)

    def test_error_offset(self):
        with self.assertRaises(SExprSyntaxError) as context:
            read_all("(a (b)")

        self.assertEqual(context.exception.offset, 0)


class QuoteTests(TestCase):
    def test_escapes(self):
        self.assertEqual(quote('a "b"\n'), r'"a \"b\"\n"')

    def test_read_back(self):
        text = 'path with "quotes" and \\ backslash'

        self.assertEqual(read_one(quote(text)), String(text))
