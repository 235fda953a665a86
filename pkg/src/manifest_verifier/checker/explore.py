"""
Symbolic exploration of the orderings of a resource graph.

Every topological order of the graph is run on one shared symbolic input. Orders
are built one vertex at a time from the vertices whose predecessors all ran. When
one of them commutes with every vertex still to run, only that vertex is tried:
every other order can be rearranged to start with it, since only the vertices
unrelated to it can run before it. Partial orders reaching the same set of
executed vertices with identical states are merged.
"""

from __future__ import annotations

import time
from collections.abc import Callable, Mapping
from dataclasses import dataclass

import structlog

from manifest_verifier.conf import settings
from manifest_verifier.frontend.graph import ResourceGraph
from manifest_verifier.fsir.syntax import FsExpr
from manifest_verifier.symbolic.encoding import Encoder, LogicalState

from .exceptions import BudgetExceeded

__all__ = ["Branch", "Budget", "Exploration", "explore"]

logger = structlog.stdlib.get_logger(__name__)

type Commutes = Callable[[str, str], bool]


@dataclass(frozen=True)
class Budget:
    branches: int
    #: seconds
    time: float

    @classmethod
    def from_settings(cls) -> Budget:
        return cls(branches=settings.BRANCH_BUDGET, time=settings.TIME_BUDGET)


@dataclass(frozen=True)
class Branch:
    state: LogicalState
    #: the order the vertices ran in
    order: tuple[str, ...]


@dataclass(frozen=True)
class Exploration:
    #: one branch per distinct final state, in the order they were found
    finals: tuple[Branch, ...]
    #: the partial orders visited
    branches: int


def _commutes_with_rest(
    vertex: str, unordered: frozenset[str], commutes: Commutes
) -> bool:
    return all(commutes(vertex, other) for other in unordered)


def explore(
    graph: ResourceGraph,
    compiled: Mapping[str, FsExpr],
    encoder: Encoder,
    *,
    commutes: Commutes | None = None,
    budget: Budget | None = None,
) -> Exploration:
    """
    Run every ordering of ``graph`` on the input state of ``encoder``.

    Without ``commutes`` every ordering is explored.

    :raises BudgetExceeded: when more partial orders than allowed are visited or
        the time limit passes.
    """
    budget = budget or Budget.from_settings()
    deadline = time.monotonic() + budget.time
    order = graph.topological_order()
    position = {vertex: index for index, vertex in enumerate(order)}
    predecessors = {vertex: graph.predecessors(vertex) for vertex in graph}
    # descendants always run later, so they never need to be swapped with it
    later = {vertex: graph.descendants(vertex) | {vertex} for vertex in graph}
    everything = frozenset(graph.vertices)

    finals: dict[tuple, Branch] = {}
    seen: set[tuple[frozenset[str], tuple]] = set()
    stack: list[tuple[frozenset[str], LogicalState, tuple[str, ...]]] = [
        (frozenset(), encoder.input_state(), ())
    ]
    branches = 0
    while stack:
        done, state, prefix = stack.pop()
        if (done, state.key) in seen:
            continue
        seen.add((done, state.key))

        branches += 1
        if branches > budget.branches:
            raise BudgetExceeded("branch", budget.branches)
        if time.monotonic() > deadline:
            raise BudgetExceeded("time", budget.time)

        if done == everything:
            finals.setdefault(state.key, Branch(state=state, order=prefix))
            continue

        remaining = everything - done
        ready = sorted(
            (vertex for vertex in remaining if predecessors[vertex] <= done),
            key=position.__getitem__,
        )
        if commutes is not None:
            independent = next(
                (
                    vertex
                    for vertex in ready
                    if _commutes_with_rest(vertex, remaining - later[vertex], commutes)
                ),
                None,
            )
            if independent is not None:
                ready = [independent]

        # pushed in reverse so the first ready vertex is explored first
        for vertex in reversed(ready):
            stack.append(
                (
                    done | {vertex},
                    encoder.encode_step(compiled[vertex], state),
                    (*prefix, vertex),
                )
            )

    logger.debug(
        "orderings_explored",
        vertices=len(graph),
        branches=branches,
        final_states=len(finals),
    )
    return Exploration(finals=tuple(finals.values()), branches=branches)
