"""
Checks on deterministic manifests.

Once a graph is known to be deterministic, any one of its orderings stands for
all of them, so idempotence and invariants are checked on a single expression.
"""

from __future__ import annotations

from collections.abc import Mapping

import structlog

from manifest_verifier.frontend.graph import ResourceGraph
from manifest_verifier.fsir.evaluation import evaluate
from manifest_verifier.fsir.filesystem import File, Ok
from manifest_verifier.fsir.paths import Path
from manifest_verifier.fsir.syntax import FsExpr, Seq, seq
from manifest_verifier.resources.base import CompileEnv
from manifest_verifier.resources.compiler import compile_graph
from manifest_verifier.symbolic.domain import content_alphabet, dom_bound
from manifest_verifier.symbolic.encoding import Encoder
from manifest_verifier.symbolic.equivalence import (
    Inequiv,
    check_equiv,
    check_sat_witness,
)
from manifest_verifier.symbolic.smtlib import and_, eq, file_of, not_
from manifest_verifier.symbolic.solver import Solver

from .determinism import CheckOptions, check_compiled_determinism
from .exceptions import DeterminismRequired, ReplayFailure
from .verdicts import (
    Deterministic,
    Idempotent,
    InvariantHolds,
    InvariantViolated,
    NonDeterministic,
    NonIdempotent,
    Statistics,
)

__all__ = [
    "check_compiled_idempotence",
    "check_compiled_invariant_file",
    "check_idempotence",
    "check_invariant_file",
    "linearize",
]

logger = structlog.stdlib.get_logger(__name__)


def linearize(
    graph: ResourceGraph,
    compiled: Mapping[str, FsExpr],
    determinism: Deterministic | NonDeterministic | None,
) -> FsExpr:
    """
    Sequence the resources in topological order, ties broken by title.

    :raises DeterminismRequired: unless ``determinism`` shows that this graph is
        deterministic.
    """
    if not isinstance(determinism, Deterministic) or determinism.graph != graph:
        raise DeterminismRequired("linearization", determinism)
    return seq(*(compiled[vertex] for vertex in graph.topological_order()))


def _establish(
    graph: ResourceGraph,
    compiled: Mapping[str, FsExpr],
    check: str,
    solver: Solver,
    options: CheckOptions | None,
    determinism: Deterministic | NonDeterministic | None,
) -> FsExpr:
    if determinism is None:
        determinism = check_compiled_determinism(
            graph, compiled, solver=solver, options=options
        )
    if not isinstance(determinism, Deterministic):
        raise DeterminismRequired(check, determinism)
    return linearize(graph, compiled, determinism)


def check_compiled_idempotence(
    graph: ResourceGraph,
    compiled: Mapping[str, FsExpr],
    *,
    solver: Solver | None = None,
    options: CheckOptions | None = None,
    determinism: Deterministic | NonDeterministic | None = None,
) -> Idempotent | NonIdempotent:
    """
    Decide whether applying the manifest twice is the same as applying it once.

    Determinism is checked first unless its verdict is passed in.

    :raises DeterminismRequired: if the graph is not deterministic.
    """
    solver = solver or Solver()
    expr = _establish(graph, compiled, "idempotence", solver, options, determinism)

    queries = solver.queries
    twice = Seq(expr, expr)
    result = check_equiv(expr, twice, solver, kind="idempotence")
    stats = Statistics(
        vertices=len(graph),
        domain_paths=len(dom_bound(expr)),
        queries=solver.queries - queries,
    )
    logger.info("idempotence_checked", idempotent=not isinstance(result, Inequiv))
    if not isinstance(result, Inequiv):
        return Idempotent(stats=stats)

    first_run = evaluate(expr, result.witness)
    second_run = evaluate(twice, result.witness)
    if first_run == second_run:
        logger.error("counterexample_not_reproduced", witness=repr(result.witness))
        raise ReplayFailure("The solver input gives the same result after two runs.")
    return NonIdempotent(
        input=result.witness,
        first_run=first_run,
        second_run=second_run,
        stats=stats,
    )


def check_idempotence(
    graph: ResourceGraph,
    env: CompileEnv,
    *,
    solver: Solver | None = None,
    options: CheckOptions | None = None,
    determinism: Deterministic | NonDeterministic | None = None,
) -> Idempotent | NonIdempotent:
    return check_compiled_idempotence(
        graph,
        compile_graph(graph, env),
        solver=solver,
        options=options,
        determinism=determinism,
    )


def check_compiled_invariant_file(
    graph: ResourceGraph,
    compiled: Mapping[str, FsExpr],
    path: Path,
    content: str,
    *,
    solver: Solver | None = None,
    options: CheckOptions | None = None,
    determinism: Deterministic | NonDeterministic | None = None,
) -> InvariantHolds | InvariantViolated:
    """
    Decide whether every successful run leaves ``path`` a file with ``content``.

    :raises DeterminismRequired: if the graph is not deterministic.
    """
    solver = solver or Solver()
    expr = _establish(graph, compiled, "invariant", solver, options, determinism)

    queries = solver.queries
    encoder = Encoder(
        dom_bound(expr, extra=[path]), content_alphabet(expr, extra=[content])
    )
    final = encoder.encode_step(expr, encoder.input_state())
    expected = file_of(encoder.content(content))
    violated = and_(final.ok, not_(eq(final.fs[path], expected)))
    witness = check_sat_witness(encoder, solver, "invariant", [violated])
    stats = Statistics(
        vertices=len(graph),
        domain_paths=len(encoder.domain),
        queries=solver.queries - queries,
    )
    logger.info("invariant_checked", path=str(path), holds=witness is None)
    if witness is None:
        return InvariantHolds(stats=stats)

    result = evaluate(expr, witness)
    if not isinstance(result, Ok) or result.fs.get(path) == File(content):
        logger.error("counterexample_not_reproduced", witness=repr(witness))
        raise ReplayFailure(
            f"The solver input does not violate the invariant on {path}."
        )
    return InvariantViolated(input=witness, result=result, stats=stats)


def check_invariant_file(
    graph: ResourceGraph,
    env: CompileEnv,
    path: Path,
    content: str,
    *,
    solver: Solver | None = None,
    options: CheckOptions | None = None,
    determinism: Deterministic | NonDeterministic | None = None,
) -> InvariantHolds | InvariantViolated:
    return check_compiled_invariant_file(
        graph,
        compile_graph(graph, env),
        path,
        content,
        solver=solver,
        options=options,
        determinism=determinism,
    )
