from collections.abc import Sequence
from unittest import TestCase

from manifest_verifier.analyses.commutativity import comm_abstract
from manifest_verifier.frontend.graph import ResourceGraph
from manifest_verifier.fsir.paths import Path
from manifest_verifier.fsir.syntax import FsExpr, Mkdir
from manifest_verifier.resources.base import install_file
from manifest_verifier.resources.tests.factories import PackageFactory
from manifest_verifier.symbolic.domain import content_alphabet, dom_bound
from manifest_verifier.symbolic.encoding import Encoder

from ..exceptions import BudgetExceeded
from ..explore import Budget, explore

X = Path.parse("/x")

GENEROUS = Budget(branches=1000, time=60)


def packages(
    exprs: dict[str, FsExpr], edges: Sequence[tuple[str, str]] = ()
) -> tuple[ResourceGraph, dict[str, FsExpr], Encoder]:
    graph = ResourceGraph.build(
        [PackageFactory.build(title=name) for name in exprs],
        [(f"Package[{source}]", f"Package[{target}]") for source, target in edges],
    )
    compiled = {f"Package[{name}]": expr for name, expr in exprs.items()}
    values = list(compiled.values())
    encoder = Encoder(dom_bound(*values), content_alphabet(*values))
    return graph, compiled, encoder


def syntactic(compiled: dict[str, FsExpr]):
    summaries = {vertex: comm_abstract(expr) for vertex, expr in compiled.items()}
    return lambda first, second: summaries[first].commutes_with(summaries[second])


class ExploreTests(TestCase):
    def test_chain_has_one_final_state(self):
        graph, compiled, encoder = packages(
            {name: install_file(X, name) for name in "abc"},
            edges=[("a", "b"), ("b", "c")],
        )

        exploration = explore(graph, compiled, encoder, budget=GENEROUS)

        self.assertEqual(len(exploration.finals), 1)
        self.assertEqual(
            exploration.finals[0].order, ("Package[a]", "Package[b]", "Package[c]")
        )
        self.assertEqual(exploration.branches, 4)

    def test_conflicting_writes_branch(self):
        graph, compiled, encoder = packages(
            {"a": install_file(X, "a"), "b": install_file(X, "b")}
        )

        exploration = explore(
            graph, compiled, encoder, commutes=syntactic(compiled), budget=GENEROUS
        )

        self.assertEqual(len(exploration.finals), 2)
        self.assertEqual(
            {branch.order for branch in exploration.finals},
            {("Package[a]", "Package[b]"), ("Package[b]", "Package[a]")},
        )

    def test_commuting_resources_are_explored_once(self):
        graph, compiled, encoder = packages(
            {name: Mkdir(Path.parse(f"/{name}")) for name in "abc"}
        )

        reduced = explore(
            graph, compiled, encoder, commutes=syntactic(compiled), budget=GENEROUS
        )
        full = explore(graph, compiled, encoder, budget=GENEROUS)

        self.assertEqual(len(reduced.finals), 1)
        self.assertEqual(reduced.branches, 4)
        self.assertGreater(full.branches, reduced.branches)

    def test_empty_graph(self):
        graph, compiled, encoder = packages({})

        exploration = explore(graph, compiled, encoder, budget=GENEROUS)

        self.assertEqual(len(exploration.finals), 1)
        self.assertEqual(exploration.finals[0].order, ())

    def test_budget_exceeded(self):
        graph, compiled, encoder = packages(
            {"a": install_file(X, "a"), "b": install_file(X, "b")}
        )

        for budget, name in [
            (Budget(branches=2, time=60), "branch"),
            (Budget(branches=1000, time=-1), "time"),
        ]:
            with self.subTest(budget=name):
                with self.assertRaises(BudgetExceeded) as context:
                    explore(graph, compiled, encoder, budget=budget)

                self.assertEqual(context.exception.budget, name)
