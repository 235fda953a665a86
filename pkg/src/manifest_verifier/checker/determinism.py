"""
Checking that a resource graph is deterministic: every input filesystem has a
single outcome, whatever order the resources are applied in.

The graph is first reduced: resources that commute with everything that may run
after them are eliminated, and paths owned by a single resource are pruned from
it. The orderings of what remains are explored symbolically and the solver is
asked for an input on which two of the final states differ.

Eliminating resources preserves deterministic verdicts only, so a divergence is
replayed on the original graph before it is reported. When the replay does not
reproduce it, the check is repeated without the reductions.
"""

from __future__ import annotations

from collections.abc import Collection, Mapping
from dataclasses import dataclass, replace

import structlog

from manifest_verifier.analyses.commutativity import CommAbsState, comm_abstract
from manifest_verifier.analyses.elimination import Elimination, eliminate_resources
from manifest_verifier.analyses.pruning import PruneResult, prune_graph, tracked_paths
from manifest_verifier.frontend.graph import ResourceGraph
from manifest_verifier.fsir.evaluation import run_sequence
from manifest_verifier.fsir.filesystem import EvalResult, FileSystem
from manifest_verifier.fsir.oracle import enumerate_filesystems
from manifest_verifier.fsir.paths import Path
from manifest_verifier.fsir.syntax import FsExpr, Seq
from manifest_verifier.resources.base import CompileEnv
from manifest_verifier.resources.compiler import compile_graph
from manifest_verifier.symbolic.domain import content_alphabet, dom_bound
from manifest_verifier.symbolic.encoding import Encoder
from manifest_verifier.symbolic.equivalence import (
    Divergence,
    Equiv,
    check_equiv,
    find_divergence,
)
from manifest_verifier.symbolic.solver import Solver

from .exceptions import ReplayFailure
from .explore import Budget, Exploration, explore
from .verdicts import Deterministic, NonDeterministic, Statistics

__all__ = [
    "CheckOptions",
    "Reduction",
    "brute_force_determinism",
    "check_compiled_determinism",
    "check_determinism",
    "reduce_graph",
]

logger = structlog.stdlib.get_logger(__name__)


@dataclass(frozen=True)
class CheckOptions:
    #: explore a single order among commuting resources
    por: bool = True
    prune: bool = True
    elim: bool = True
    #: ask the solver whether two resources commute when the syntactic check fails
    semantic_commute: bool = False
    budget: Budget | None = None

    @property
    def reduces(self) -> bool:
        return self.prune or self.elim

    def without_reductions(self) -> CheckOptions:
        return replace(self, prune=False, elim=False)


@dataclass(frozen=True)
class Reduction:
    #: the resources left after elimination
    graph: ResourceGraph
    #: their expressions after pruning
    compiled: Mapping[str, FsExpr]
    #: in the order of removal
    eliminated: tuple[str, ...]
    pruning: PruneResult


def reduce_graph(
    graph: ResourceGraph, compiled: Mapping[str, FsExpr], options: CheckOptions
) -> Reduction:
    summaries = {vertex: comm_abstract(compiled[vertex]) for vertex in graph}
    if options.elim:
        elimination = eliminate_resources(graph, compiled, summaries)
    else:
        elimination = Elimination(graph=graph)

    survivors = elimination.graph
    remaining = {vertex: compiled[vertex] for vertex in survivors}
    if options.prune:
        pruning = prune_graph(survivors, remaining, summaries)
    else:
        pruning = PruneResult(compiled=remaining)
    return Reduction(
        graph=survivors,
        compiled=pruning.compiled,
        eliminated=elimination.eliminated,
        pruning=pruning,
    )


class _Commutativity:
    """
    Pairwise commutativity of the reduced resources, cached.
    """

    def __init__(self, compiled: Mapping[str, FsExpr], solver: Solver, semantic: bool):
        self.compiled = compiled
        self.solver = solver
        self.semantic = semantic
        self.summaries: dict[str, CommAbsState] = {
            vertex: comm_abstract(expr) for vertex, expr in compiled.items()
        }
        self._cache: dict[frozenset[str], bool] = {}

    def __call__(self, first: str, second: str) -> bool:
        key = frozenset({first, second})
        if (known := self._cache.get(key)) is not None:
            return known
        commutes = self.summaries[first].commutes_with(self.summaries[second])
        if not commutes and self.semantic:
            e1, e2 = self.compiled[first], self.compiled[second]
            result = check_equiv(
                Seq(e1, e2), Seq(e2, e1), self.solver, kind="commutativity"
            )
            commutes = isinstance(result, Equiv)
        self._cache[key] = commutes
        return commutes


type Replay = tuple[tuple[str, ...], tuple[str, ...], EvalResult, EvalResult]


def _replay(
    compiled: Mapping[str, FsExpr],
    reduction: Reduction,
    exploration: Exploration,
    witness: FileSystem,
) -> Replay | None:
    """
    Find two explored orderings whose concrete runs on ``witness`` differ.

    The orderings are completed with the eliminated resources, the last one
    removed running first.
    """
    suffix = tuple(reversed(reduction.eliminated))
    runs = []
    for branch in exploration.finals:
        order = (*branch.order, *suffix)
        result = run_sequence([compiled[vertex] for vertex in order], witness)
        runs.append((order, result))
    first_order, first_result = runs[0]
    for order, result in runs[1:]:
        if result != first_result:
            return first_order, order, first_result, result
    return None


def _check(
    graph: ResourceGraph,
    compiled: Mapping[str, FsExpr],
    solver: Solver,
    options: CheckOptions,
) -> Deterministic | NonDeterministic:
    queries = solver.queries
    stats = Statistics(vertices=len(graph))

    reduction = reduce_graph(graph, compiled, options)
    stats.eliminated = len(reduction.eliminated)
    stats.pruned_paths = len(reduction.pruning.pruned_paths)
    stats.tracked_paths_before = len(
        tracked_paths({vertex: compiled[vertex] for vertex in reduction.graph})
    )
    stats.tracked_paths_after = len(tracked_paths(reduction.compiled))

    exprs = list(reduction.compiled.values())
    encoder = Encoder(dom_bound(*exprs), content_alphabet(*exprs))
    stats.domain_paths = len(encoder.domain)
    commutes = (
        _Commutativity(reduction.compiled, solver, options.semantic_commute)
        if options.por
        else None
    )
    exploration = explore(
        reduction.graph,
        reduction.compiled,
        encoder,
        commutes=commutes,
        budget=options.budget,
    )
    stats.branches = exploration.branches
    stats.final_states = len(exploration.finals)

    states = [branch.state for branch in exploration.finals]
    witness = None
    for divergence in Divergence:
        witness = find_divergence(encoder, states, solver, divergence)
        if witness is not None:
            break
    stats.queries = solver.queries - queries

    if witness is None:
        return Deterministic(graph, stats=stats)

    replay = _replay(compiled, reduction, exploration, witness)
    if replay is None:
        if not options.reduces:
            logger.error("counterexample_not_reproduced", witness=repr(witness))
            raise ReplayFailure(
                "The solver reported orderings that diverge, but running them on "
                "its input gives identical results."
            )
        logger.info("counterexample_not_reproduced_retrying", witness=repr(witness))
        verdict = _check(graph, compiled, solver, options.without_reductions())
        verdict.stats.analyses_disabled = True
        verdict.stats.queries += stats.queries
        return verdict

    ordering_a, ordering_b, result_a, result_b = replay
    return NonDeterministic(
        input=witness,
        ordering_a=ordering_a,
        ordering_b=ordering_b,
        result_a=result_a,
        result_b=result_b,
        stats=stats,
    )


def check_compiled_determinism(
    graph: ResourceGraph,
    compiled: Mapping[str, FsExpr],
    *,
    solver: Solver | None = None,
    options: CheckOptions | None = None,
) -> Deterministic | NonDeterministic:
    """
    Decide whether ``graph``, labelled with the expressions ``compiled``, is
    deterministic.

    :raises SolverFailure: if the solver gives no verdict.
    :raises BudgetExceeded: if the orderings cannot be explored within the budget.
    :raises ReplayFailure: if a divergence cannot be reproduced.
    """
    verdict = _check(graph, compiled, solver or Solver(), options or CheckOptions())
    logger.info(
        "determinism_checked",
        verdict=verdict.kind,
        **verdict.stats.model_dump(),
    )
    return verdict


def check_determinism(
    graph: ResourceGraph,
    env: CompileEnv,
    *,
    solver: Solver | None = None,
    options: CheckOptions | None = None,
) -> Deterministic | NonDeterministic:
    return check_compiled_determinism(
        graph, compile_graph(graph, env), solver=solver, options=options
    )


def brute_force_determinism(
    graph: ResourceGraph,
    compiled: Mapping[str, FsExpr],
    paths: Collection[Path] | None = None,
    contents: Collection[str] | None = None,
) -> FileSystem | None:
    """
    Run every topological order on every filesystem over ``paths`` and return
    the first input with more than one outcome, ``None`` if there is none.

    Exponential in both the graph and the domain: only for small instances.
    """
    exprs = list(compiled.values())
    if paths is None:
        paths = dom_bound(*exprs)
    if contents is None:
        contents = content_alphabet(*exprs)
    orders = [list(order) for order in graph.all_topological_orders()] or [[]]
    for fs in enumerate_filesystems(paths, contents):
        outcomes = {
            run_sequence([compiled[vertex] for vertex in order], fs)
            for order in orders
        }
        if len(outcomes) > 1:
            return fs
    return None
