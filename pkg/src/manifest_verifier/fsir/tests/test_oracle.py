from unittest import TestCase

from ..evaluation import evaluate
from ..exceptions import NotParentClosed
from ..filesystem import DIR, File
from ..oracle import enumerate_filesystems, oracle_equiv, oracle_witness
from ..paths import ROOT, Path
from ..serialization import parse_expr
from ..syntax import idemdir

A = Path.parse("/a")
B = Path.parse("/a/b")


class EnumerateFilesystemsTests(TestCase):
    def test_counts(self):
        # root: absent, dir or one of two files; /a only below a directory root
        filesystems = list(enumerate_filesystems([ROOT, A], ["x", "y"]))

        self.assertEqual(len(filesystems), 3 + 1 * 4)
        self.assertEqual(len(set(filesystems)), len(filesystems))

    def test_all_are_trees(self):
        for fs in enumerate_filesystems([ROOT, A, B], ["x"]):
            for path, value in fs.items():
                if path.is_root:
                    continue
                with self.subTest(fs=fs, path=path):
                    self.assertEqual(fs[path.parent], DIR)
                    self.assertIn(value, (DIR, File("x")))

    def test_requires_parent_closed_paths(self):
        with self.assertRaises(NotParentClosed):
            list(enumerate_filesystems([ROOT, B], ["x"]))


class OracleTests(TestCase):
    def test_idemdir_expansion(self):
        expanded = parse_expr("(if (dne /a) (mkdir /a) (if (dir? /a) skip error))")

        self.assertTrue(oracle_equiv(idemdir(A), expanded, [ROOT, A], ["x"]))

    def test_emptiness_needs_a_child(self):
        e1 = parse_expr("(if (empty-dir? /a) skip error)")
        e2 = parse_expr("(if (dir? /a) skip error)")

        # without a child of /a in the domain the two look equivalent
        self.assertTrue(oracle_equiv(e1, e2, [ROOT, A], ["x"]))
        witness = oracle_witness(e1, e2, [ROOT, A, B], ["x"])

        self.assertIsNotNone(witness)
        assert witness is not None
        self.assertIn(B, witness)
        self.assertNotEqual(evaluate(e1, witness), evaluate(e2, witness))
