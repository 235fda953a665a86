from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass

import structlog

from manifest_verifier.frontend.graph import ResourceGraph
from manifest_verifier.fsir.syntax import FsExpr

from .commutativity import CommAbsState, comm_abstract

__all__ = ["Elimination", "eliminate_resources"]

logger = structlog.stdlib.get_logger(__name__)


@dataclass(frozen=True)
class Elimination:
    graph: ResourceGraph
    #: in the order of removal, so the first one can always run last
    eliminated: tuple[str, ...] = ()

    @property
    def survivors(self) -> tuple[str, ...]:
        return self.graph.vertices


def _removable(
    graph: ResourceGraph, vertex: str, summaries: Mapping[str, CommAbsState]
) -> bool:
    ancestors = graph.ancestors(vertex)
    summary = summaries[vertex]
    return all(
        summary.commutes_with(summaries[other])
        for other in graph
        if other != vertex and other not in ancestors
    )


def eliminate_resources(
    graph: ResourceGraph,
    compiled: Mapping[str, FsExpr],
    summaries: Mapping[str, CommAbsState] | None = None,
) -> Elimination:
    """
    Remove resources that commute with everything that may run after them.

    Sinks are considered in topological order, ties broken by title, and the scan
    restarts after every removal until no sink qualifies.
    """
    if summaries is None:
        summaries = {vertex: comm_abstract(compiled[vertex]) for vertex in graph}

    eliminated: list[str] = []
    current = graph
    while True:
        sinks = set(current.sinks())
        removable = next(
            (
                vertex
                for vertex in current.topological_order()
                if vertex in sinks and _removable(current, vertex, summaries)
            ),
            None,
        )
        if removable is None:
            break
        logger.debug("resource_eliminated", resource=removable)
        eliminated.append(removable)
        current = current.without([removable])

    logger.info(
        "resources_eliminated", eliminated=len(eliminated), remaining=len(current)
    )
    return Elimination(graph=current, eliminated=tuple(eliminated))
