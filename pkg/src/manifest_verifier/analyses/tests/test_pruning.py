from pathlib import Path as FilePath
from unittest import TestCase

from hypothesis import assume, given, strategies as st

from manifest_verifier.frontend.expansion import expand
from manifest_verifier.frontend.graph import ResourceGraph
from manifest_verifier.frontend.parser import parse_manifest_file
from manifest_verifier.fsir.evaluation import evaluate
from manifest_verifier.fsir.filesystem import FileContent, FileSystem, Ok
from manifest_verifier.fsir.oracle import enumerate_filesystems, oracle_equiv
from manifest_verifier.fsir.paths import ROOT, Path
from manifest_verifier.fsir.syntax import (
    ERROR,
    SKIP,
    And,
    Cp,
    CreateFile,
    DoesNotExist,
    If,
    IsDir,
    IsEmptyDir,
    IsFile,
    Mkdir,
    Rm,
    Seq,
    seq,
    written_paths,
)
from manifest_verifier.fsir.tests.strategies import PATH_UNIVERSE, contents, exprs
from manifest_verifier.resources.base import CompileEnv, install_file
from manifest_verifier.resources.compiler import compile_graph
from manifest_verifier.resources.package_db import load_package_db
from manifest_verifier.resources.tests.factories import PackageFactory
from manifest_verifier.symbolic.domain import content_alphabet, dom_bound
from manifest_verifier.tests.property_settings import examples

from ..definitive import defwrite_abstract
from ..exceptions import PruneInapplicable
from ..pruning import prune, prune_graph, select_prunable_paths, tracked_paths

PACKAGE_DIR = FilePath(__file__).resolve().parents[2]
MANIFESTS_DIR = PACKAGE_DIR / "fixtures" / "manifests"
BUNDLED_DB = PACKAGE_DIR / "resources" / "fixtures" / "packages"

A = Path.parse("/a")
B = Path.parse("/a/b")
C = Path.parse("/c")
D = Path.parse("/d")


def assert_equivalent(test: TestCase, first, second, *extra: Path):
    test.assertTrue(
        oracle_equiv(
            first,
            second,
            dom_bound(first, second, extra=extra),
            content_alphabet(first, second),
        )
    )


def elsewhere(fs: FileSystem, path: Path) -> dict[Path, FileContent]:
    return {other: value for other, value in fs.items() if other != path}


@st.composite
def definitive_pairs(draw):
    """
    Two random expressions followed by the same write to a path, with that path.
    """
    path = draw(st.sampled_from(PATH_UNIVERSE))
    last = draw(
        st.one_of(
            st.just(Mkdir(path)),
            st.builds(CreateFile, st.just(path), contents),
            st.just(Rm(path)),
        )
    )
    return Seq(draw(exprs()), last), Seq(draw(exprs()), last), path


class PruneTests(TestCase):
    def test_tests_after_a_write_are_answered(self):
        # replacing the mkdir by skip would make the directory test fail
        expr = Seq(Mkdir(B), If(IsDir(B), SKIP, ERROR))

        pruned = prune(B, expr)

        self.assertNotIn(B, written_paths(pruned))
        assert_equivalent(self, pruned, prune(B, Mkdir(B)), B)
        self.assertEqual(pruned, If(And(IsDir(A), DoesNotExist(B)), SKIP, ERROR))

    def test_untouched_path_is_left_alone(self):
        expr = seq(install_file(A, "x"), Mkdir(C))

        self.assertEqual(prune(Path.parse("/z"), expr), expr)

    def test_copy_from_a_known_file_becomes_a_create(self):
        expr = seq(CreateFile(A, "x"), Cp(A, C))

        pruned = prune(A, expr)

        self.assertEqual(
            pruned,
            seq(
                If(And(IsDir(ROOT), DoesNotExist(A)), SKIP, ERROR),
                CreateFile(C, "x"),
            ),
        )

    def test_ruled_out_branch_becomes_an_error(self):
        expr = seq(Mkdir(A), If(IsFile(A), SKIP, ERROR))

        pruned = prune(A, expr)

        self.assertEqual(written_paths(pruned), set())
        assert_equivalent(self, pruned, ERROR, A)

    def test_pruned_file_of_a_package(self):
        pruned = prune(B, install_file(B, "pkg:x"))

        self.assertEqual(written_paths(pruned), set())
        for fs in enumerate_filesystems(dom_bound(pruned, extra=[B]), ["x"]):
            with self.subTest(fs=fs):
                self.assertEqual(
                    isinstance(evaluate(pruned, fs), Ok),
                    isinstance(evaluate(install_file(B, "pkg:x"), fs), Ok),
                )

    def test_refused(self):
        cases = {
            "child created after a write": (A, seq(Mkdir(A), Mkdir(B))),
            "parent removed after a write": (B, seq(CreateFile(B, "x"), Rm(A))),
            "copied with unknown content": (A, seq(Cp(C, A), Cp(A, D))),
            "unknown state at a test": (
                A,
                seq(
                    If(IsDir(C), CreateFile(A, "x"), Mkdir(A)),
                    If(IsFile(A), SKIP, ERROR),
                ),
            ),
            "emptiness of the parent tested": (
                B,
                seq(Mkdir(B), If(IsEmptyDir(A), SKIP, SKIP)),
            ),
        }
        for description, (path, expr) in cases.items():
            with self.subTest(description):
                with self.assertRaises(PruneInapplicable) as context:
                    prune(path, expr)

                self.assertEqual(context.exception.path, path)

    @given(exprs(), st.sampled_from(PATH_UNIVERSE))
    @examples(acceptance=5_000)
    def test_pruned_expressions_agree_elsewhere(self, expr, path):
        try:
            pruned = prune(path, expr)
        except PruneInapplicable:
            return

        self.assertNotIn(path, written_paths(pruned))
        domain = dom_bound(expr, pruned, extra=[path])
        for fs in enumerate_filesystems(domain, content_alphabet(expr)):
            original, result = evaluate(expr, fs), evaluate(pruned, fs)
            self.assertEqual(
                isinstance(result, Ok), isinstance(original, Ok), f"on {fs}"
            )
            if isinstance(result, Ok) and isinstance(original, Ok):
                self.assertEqual(
                    elsewhere(result.fs, path), elsewhere(original.fs, path), f"on {fs}"
                )

    @given(definitive_pairs())
    @examples(acceptance=5_000, default=100)
    def test_pruning_preserves_equivalence_of_definitive_writers(self, case):
        first, second, path = case
        written = defwrite_abstract(first).definitive(path)
        assume(written is not None)
        assume(written == defwrite_abstract(second).definitive(path))
        try:
            pruned_first, pruned_second = prune(path, first), prune(path, second)
        except PruneInapplicable:
            return

        domain = dom_bound(first, second, pruned_first, pruned_second, extra=[path])
        alphabet = content_alphabet(first, second)
        self.assertEqual(
            oracle_equiv(pruned_first, pruned_second, domain, alphabet),
            oracle_equiv(first, second, domain, alphabet),
            (first, second, path),
        )


class PruneGraphTests(TestCase):
    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        env = CompileEnv(db=load_package_db(BUNDLED_DB, "ubuntu-trusty"))
        cls.graph = expand(parse_manifest_file(MANIFESTS_DIR / "apache2_config.pp"))
        cls.compiled = compile_graph(cls.graph, env)

    def test_shared_paths_are_kept(self):
        selected = select_prunable_paths(self.graph, self.compiled)

        self.assertIn(Path.parse("/etc/apache2/apache2.conf"), selected)
        self.assertIn(Path.parse("/var/db/pkgs/apache2"), selected)
        for kept in (
            "/etc/apache2/sites-available/000-default.conf",
            "/etc/apache2/sites-available",
            "/etc/apache2",
        ):
            with self.subTest(path=kept):
                self.assertNotIn(Path.parse(kept), selected)

    def test_most_paths_are_pruned(self):
        result = prune_graph(self.graph, self.compiled)

        before = tracked_paths(self.compiled)
        after = tracked_paths(result.compiled)
        self.assertLessEqual(len(after) * 10, len(before))
        self.assertEqual(after & result.pruned_paths, set())

    def test_file_resource_is_unchanged(self):
        vertex = "File[/etc/apache2/sites-available/000-default.conf]"

        result = prune_graph(self.graph, self.compiled)

        self.assertEqual(result.compiled[vertex], self.compiled[vertex])
        self.assertNotIn(vertex, result.pruned)


class SelectPrunablePathsTests(TestCase):
    def test_write_guarded_by_an_emptiness_test(self):
        q, p = Path.parse("/q"), Path.parse("/p")
        guarded = If(IsEmptyDir(q), CreateFile(p, "a"), CreateFile(p, "b"))
        graph = ResourceGraph.build(
            [PackageFactory.build(title=name) for name in ("v", "w")]
        )
        for other, prunable in [(Path.parse("/q/x"), False), (C, True)]:
            with self.subTest(other=other):
                compiled = {
                    "Package[v]": guarded,
                    "Package[w]": CreateFile(other, "c"),
                }

                selected = select_prunable_paths(graph, compiled)

                self.assertEqual(p in selected, prunable)
