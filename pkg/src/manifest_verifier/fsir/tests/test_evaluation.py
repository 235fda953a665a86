from unittest import TestCase

from ..evaluation import eval_pred, evaluate, run_sequence
from ..exceptions import TreeClosureViolation
from ..filesystem import DIR, ERR, File, FileSystem, Ok
from ..paths import Path
from ..serialization import parse_expr, parse_pred


EMPTY_ROOT = FileSystem.from_strings({"/": DIR})


class FileSystemTests(TestCase):
    def test_tree_closure(self):
        with self.assertRaises(TreeClosureViolation):
            FileSystem.from_strings({"/": DIR, "/a/b": DIR})
        with self.assertRaises(TreeClosureViolation):
            FileSystem.from_strings({"/": DIR, "/a": File("x"), "/a/b": DIR})

    def test_updates_return_new_values(self):
        original = EMPTY_ROOT

        updated = original.set(Path.parse("/a"), DIR)

        self.assertNotIn(Path.parse("/a"), original)
        self.assertIn(Path.parse("/a"), updated)
        self.assertEqual(updated.remove(Path.parse("/a")), original)

    def test_equality_and_hash(self):
        first = FileSystem.from_strings({"/": DIR, "/a": File("x")})
        second = FileSystem.from_strings({"/a": File("x"), "/": DIR})

        self.assertEqual(first, second)
        self.assertEqual(hash(first), hash(second))
        self.assertNotEqual(first, EMPTY_ROOT)

    def test_restrict(self):
        full = FileSystem.from_strings({"/": DIR, "/a": DIR, "/a/f": File("x")})

        restricted = full.restrict([Path.parse("/"), Path.parse("/a")])

        self.assertEqual(restricted, FileSystem.from_strings({"/": DIR, "/a": DIR}))


class EvalPredTests(TestCase):
    def test_predicates(self):
        state = FileSystem.from_strings(
            {"/": DIR, "/d": DIR, "/e": DIR, "/d/f": File("x")}
        )
        cases = [
            ("(dne /z)", True),
            ("(dne /d)", False),
            ("(file? /d/f)", True),
            ("(file? /d)", False),
            ("(dir? /d)", True),
            ("(empty-dir? /e)", True),
            ("(empty-dir? /d)", False),
            ("(empty-dir? /d/f)", False),
            ("(and (dir? /d) (not (dne /e)))", True),
            ("(or false (file? /z))", False),
        ]
        for text, expected in cases:
            with self.subTest(pred=text):
                self.assertEqual(eval_pred(parse_pred(text), state), expected)


class EvaluateTests(TestCase):
    def test_mkdir(self):
        self.assertEqual(
            evaluate(parse_expr("(mkdir /a)"), EMPTY_ROOT),
            Ok(FileSystem.from_strings({"/": DIR, "/a": DIR})),
        )
        # parent missing, target present, parent a file
        self.assertEqual(evaluate(parse_expr("(mkdir /a/b)"), EMPTY_ROOT), ERR)
        self.assertEqual(
            evaluate(parse_expr("(seq (mkdir /a) (mkdir /a))"), EMPTY_ROOT), ERR
        )
        self.assertEqual(
            evaluate(parse_expr('(seq (create /a "x") (mkdir /a/b))'), EMPTY_ROOT),
            ERR,
        )

    def test_create_file(self):
        result = evaluate(parse_expr('(create /f "hello")'), EMPTY_ROOT)

        self.assertEqual(result, Ok(EMPTY_ROOT.set(Path.parse("/f"), File("hello"))))

    def test_rm(self):
        state = FileSystem.from_strings(
            {"/": DIR, "/d": DIR, "/d/f": File("x"), "/e": DIR}
        )
        with self.subTest("file"):
            self.assertEqual(
                evaluate(parse_expr("(rm /d/f)"), state),
                Ok(state.remove(Path.parse("/d/f"))),
            )
        with self.subTest("empty directory"):
            self.assertEqual(
                evaluate(parse_expr("(rm /e)"), state),
                Ok(state.remove(Path.parse("/e"))),
            )
        with self.subTest("non-empty directory"):
            self.assertEqual(evaluate(parse_expr("(rm /d)"), state), ERR)
        with self.subTest("missing"):
            self.assertEqual(evaluate(parse_expr("(rm /z)"), state), ERR)

    def test_cp(self):
        state = FileSystem.from_strings({"/": DIR, "/src": File("data"), "/d": DIR})

        result = evaluate(parse_expr("(cp /src /d/copy)"), state)

        self.assertEqual(result, Ok(state.set(Path.parse("/d/copy"), File("data"))))
        self.assertEqual(evaluate(parse_expr("(cp /d /copy)"), state), ERR)
        self.assertEqual(evaluate(parse_expr("(cp /src /src)"), state), ERR)

    def test_root_operations_fail(self):
        state = FileSystem.from_strings({"/": DIR})
        for text in ("(mkdir /)", "(rm /)", '(create / "x")'):
            with self.subTest(expr=text):
                self.assertEqual(evaluate(parse_expr(text), state), ERR)
        self.assertEqual(evaluate(parse_expr("(mkdir /)"), FileSystem()), ERR)

    def test_if_and_error(self):
        expr = parse_expr("(if (dir? /a) skip error)")

        self.assertEqual(evaluate(expr, EMPTY_ROOT), ERR)
        state = EMPTY_ROOT.set(Path.parse("/a"), DIR)
        self.assertEqual(evaluate(expr, state), Ok(state))

    def test_run_sequence(self):
        exprs = [parse_expr("(mkdir /a)"), parse_expr('(create /a/f "x")')]

        result = run_sequence(exprs, EMPTY_ROOT)

        self.assertEqual(
            result,
            Ok(FileSystem.from_strings({"/": DIR, "/a": DIR, "/a/f": File("x")})),
        )
        self.assertEqual(run_sequence(list(reversed(exprs)), EMPTY_ROOT), ERR)
        self.assertEqual(run_sequence([], EMPTY_ROOT), Ok(EMPTY_ROOT))
