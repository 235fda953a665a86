"""
Pruning paths out of resource expressions.

Pruning ``p`` partially evaluates an expression with a store holding what is
known about ``p``. Every write to ``p`` is replaced by the check deciding whether
the write succeeds, and later tests of ``p`` are answered from the store. The
result never writes ``p``, so a query only needs the input value of ``p``.

Where the store cannot answer a question about ``p`` exactly, pruning is refused
with :class:`PruneInapplicable`.
"""

from __future__ import annotations

from collections import defaultdict
from collections.abc import Mapping
from dataclasses import dataclass, field
from typing import assert_never

import structlog

from manifest_verifier.frontend.graph import ResourceGraph
from manifest_verifier.fsir.paths import Path
from manifest_verifier.fsir.syntax import (
    ERROR,
    FALSE,
    SKIP,
    TRUE,
    And,
    Cp,
    CreateFile,
    DoesNotExist,
    Error,
    FalsePred,
    FsExpr,
    FsPred,
    If,
    IsDir,
    IsEmptyDir,
    IsFile,
    Mkdir,
    Not,
    Or,
    Rm,
    Seq,
    Skip,
    TruePred,
    pred_paths,
    seq,
    written_paths,
)

from manifest_verifier.symbolic.domain import listed_in_pred

from .commutativity import CommAbsState, comm_abstract
from .definitive import (
    UNTOUCHED,
    Kind,
    Known,
    PathValue,
    Top,
    Untouched,
    defwrite_abstract,
    merge_values,
    pred_truth,
    refine,
)
from .exceptions import PruneInapplicable

__all__ = [
    "PruneResult",
    "prune",
    "prune_graph",
    "select_prunable_paths",
    "tracked_paths",
]

logger = structlog.stdlib.get_logger(__name__)


def _not(pred: FsPred) -> FsPred:
    match pred:
        case TruePred():
            return FALSE
        case FalsePred():
            return TRUE
        case Not(operand):
            return operand
        case _:
            return Not(pred)


def _and(left: FsPred, right: FsPred) -> FsPred:
    if left == FALSE or right == FALSE:
        return FALSE
    if left == TRUE:
        return right
    if right == TRUE:
        return left
    return And(left, right)


def _or(left: FsPred, right: FsPred) -> FsPred:
    if left == TRUE or right == TRUE:
        return TRUE
    if left == FALSE:
        return right
    if right == FALSE:
        return left
    return Or(left, right)


def _constant(truth: bool) -> FsPred:
    return TRUE if truth else FALSE


type Store = PathValue | None


class _Pruner:
    def __init__(self, path: Path):
        self.path = path

    def refuse(self, reason: str) -> PruneInapplicable:
        return PruneInapplicable(self.path, reason)

    def _is_parent(self, path: Path) -> bool:
        return not self.path.is_root and path == self.path.parent

    def _is_child(self, path: Path) -> bool:
        return not path.is_root and path.parent == self.path

    def fold(self, pred: FsPred, store: PathValue) -> FsPred:
        """
        Answer the tests of the pruned path from the store.
        """
        match pred:
            case DoesNotExist(path) | IsFile(path) | IsDir(path) if path == self.path:
                if isinstance(store, Top):
                    raise self.refuse("its state is unknown at a test")
                truth = pred_truth(pred, lambda _: store)
                return pred if truth is None else _constant(truth)
            case IsEmptyDir(path) if path == self.path:
                truth = pred_truth(pred, lambda _: store)
                if truth is not None:
                    return _constant(truth)
                if not isinstance(store, Untouched):
                    raise self.refuse("its emptiness is tested after a write")
                return pred
            case IsEmptyDir(path) if self._is_parent(path):
                if not isinstance(store, Untouched):
                    raise self.refuse("the emptiness of its parent is tested")
                return pred
            case Not(operand):
                return _not(self.fold(operand, store))
            case And(left, right):
                return _and(self.fold(left, store), self.fold(right, store))
            case Or(left, right):
                return _or(self.fold(left, store), self.fold(right, store))
            case _:
                return pred

    def _guarded(self, cond: FsPred, store: Store) -> tuple[FsExpr, Store]:
        if cond == TRUE:
            return SKIP, store
        if cond == FALSE:
            return ERROR, None
        return If(cond, SKIP, ERROR), store

    def _create(
        self, store: PathValue, written: PathValue, requires: FsPred = TRUE
    ) -> tuple[FsExpr, Store]:
        if self.path.is_root:
            return ERROR, None
        absent = self.fold(DoesNotExist(self.path), store)
        return self._guarded(
            _and(requires, _and(IsDir(self.path.parent), absent)), written
        )

    def _restrict(self, store: PathValue, cond: FsPred, holds: bool) -> Store:
        refinement = refine(cond, holds)
        if refinement is None or refinement[0] != self.path:
            return store
        match store:
            case Untouched(kinds):
                allowed = kinds & refinement[1]
                return Untouched(allowed) if allowed else None
            case _:
                return store

    def run(self, expr: FsExpr, store: PathValue) -> tuple[FsExpr, Store]:
        path = self.path
        match expr:
            case Skip():
                return expr, store
            case Error():
                return expr, None
            case Mkdir(target) if target == path:
                return self._create(store, Known(Kind.DIR))
            case CreateFile(target, content) if target == path:
                return self._create(store, Known(Kind.FILE, content))
            case Cp(src, target) if target == path:
                source = IsFile(src)
                if src == path:
                    source = self.fold(source, store)
                return self._create(store, Known(Kind.FILE), requires=source)
            case Rm(target) if target == path:
                if path.is_root:
                    return ERROR, None
                cond = _or(
                    self.fold(IsFile(path), store), self.fold(IsEmptyDir(path), store)
                )
                return self._guarded(cond, Known(Kind.DNE))
            case Mkdir(target) | CreateFile(target, _) | Cp(_, target) if (
                self._is_child(target) and not isinstance(store, Untouched)
            ):
                raise self.refuse(f"{target} is created after a write to it")
            case Rm(target) if self._is_parent(target) and not isinstance(
                store, Untouched
            ):
                raise self.refuse(f"its parent {target} is removed after a write")
            case Cp(src, dst) if src == path:
                match store:
                    case Untouched():
                        return expr, store
                    case Known(Kind.FILE, str() as content):
                        return CreateFile(dst, content), store
                    case Known(Kind.DIR | Kind.DNE, _):
                        return ERROR, None
                    case _:
                        raise self.refuse("it is copied with unknown content")
            case Mkdir() | CreateFile() | Rm() | Cp():
                return expr, store
            case Seq(first, second):
                first_pruned, middle = self.run(first, store)
                if middle is None:
                    return first_pruned, None
                second_pruned, after = self.run(second, middle)
                return seq(first_pruned, second_pruned), after
            case If(cond, then, orelse):
                return self._run_if(cond, then, orelse, store)
            case _:  # pragma: no cover
                assert_never(expr)

    def _run_if(
        self, cond: FsPred, then: FsExpr, orelse: FsExpr, store: PathValue
    ) -> tuple[FsExpr, Store]:
        folded = self.fold(cond, store)
        if folded == TRUE:
            return self._run_branch(then, self._restrict(store, cond, True))
        if folded == FALSE:
            return self._run_branch(orelse, self._restrict(store, cond, False))

        then_pruned, then_store = self._run_branch(
            then, self._restrict(store, cond, True)
        )
        else_pruned, else_store = self._run_branch(
            orelse, self._restrict(store, cond, False)
        )
        match then_store, else_store:
            case None, _:
                merged = else_store
            case _, None:
                merged = then_store
            case _:
                merged = merge_values(then_store, else_store)
        if then_pruned == else_pruned:
            return then_pruned, merged
        return If(folded, then_pruned, else_pruned), merged

    def _run_branch(self, expr: FsExpr, store: Store) -> tuple[FsExpr, Store]:
        # a branch the store rules out is never taken
        if store is None:
            return ERROR, None
        return self.run(expr, store)


def prune(path: Path, expr: FsExpr) -> FsExpr:
    """
    Remove every write to ``path`` from ``expr``, keeping its outcome on every
    other path and whether it succeeds.

    :raises PruneInapplicable: if the state of ``path`` is needed but not known.
    """
    pruned, _ = _Pruner(path).run(expr, UNTOUCHED)
    return pruned


def _tainted_writes(expr: FsExpr, tainted: set[Path]) -> set[Path]:
    """
    Extend ``tainted`` with the paths ``expr`` writes depending on tainted paths:
    under a guard reading one or testing the emptiness of its parent, or copying
    from one.
    """
    tainted = set(tainted)

    def walk(node: FsExpr, guarded: bool) -> None:
        match node:
            case Mkdir(path) | CreateFile(path, _) | Rm(path):
                if guarded:
                    tainted.add(path)
            case Cp(src, dst):
                if guarded or src in tainted:
                    tainted.add(dst)
            case Seq(first, second):
                walk(first, guarded)
                walk(second, guarded)
            case If(cond, then, orelse):
                listed = set(listed_in_pred(cond))
                depends = (
                    guarded
                    or not tainted.isdisjoint(pred_paths(cond))
                    or any(
                        not path.is_root and path.parent in listed
                        for path in tainted
                    )
                )
                walk(then, depends)
                walk(orelse, depends)

    walk(expr, False)
    return tainted


def select_prunable_paths(
    graph: ResourceGraph,
    compiled: Mapping[str, FsExpr],
    summaries: Mapping[str, CommAbsState] | None = None,
) -> frozenset[Path]:
    """
    The paths of ``graph`` that a single resource writes and nothing else touches.

    A path qualifies when one resource writes it, no other resource accesses it,
    nobody observes the children of its parent, and its final value does not
    depend on the other resources: it is a definitive write, or every guard and
    copy source leading to a write of it reads only paths no other resource
    writes. A directory also needs all of its mentioned descendants to qualify.
    """
    if summaries is None:
        summaries = {vertex: comm_abstract(compiled[vertex]) for vertex in graph}

    accessors: dict[Path, set[str]] = defaultdict(set)
    listed: set[Path] = set()
    for vertex in graph:
        summary = summaries[vertex]
        for path in summary.access:
            accessors[path].add(vertex)
        listed |= summary.listed

    candidates: set[Path] = set()
    for vertex in graph:
        summary = summaries[vertex]
        owned = {
            path
            for path in summary.written
            if accessors[path] == {vertex}
            and not path.is_root
            and path.parent not in listed
        }
        if not owned:
            continue
        others = set().union(
            *(summaries[other].written for other in graph if other != vertex)
        )
        tainted = _tainted_writes(compiled[vertex], others)
        definitive = defwrite_abstract(compiled[vertex])
        candidates |= {
            path
            for path in owned
            if path not in tainted or definitive.definitive(path) is not None
        }

    descendants: dict[Path, list[Path]] = defaultdict(list)
    for path in accessors:
        for ancestor in path.ancestors():
            descendants[ancestor].append(path)

    selected: set[Path] = set()
    for path in sorted(candidates, key=lambda path: (-len(path.segments), path)):
        if all(descendant in selected for descendant in descendants[path]):
            selected.add(path)
    return frozenset(selected)


@dataclass(frozen=True)
class PruneResult:
    compiled: Mapping[str, FsExpr]
    pruned: Mapping[str, tuple[Path, ...]] = field(default_factory=dict)

    @property
    def pruned_paths(self) -> set[Path]:
        return {path for paths in self.pruned.values() for path in paths}


def tracked_paths(compiled: Mapping[str, FsExpr]) -> set[Path]:
    """
    The paths written by some expression, whose state a query has to follow.
    """
    return set().union(*(written_paths(expr) for expr in compiled.values()))


def prune_graph(
    graph: ResourceGraph,
    compiled: Mapping[str, FsExpr],
    summaries: Mapping[str, CommAbsState] | None = None,
) -> PruneResult:
    """
    Prune the selected paths from their writers, deepest paths first.

    A path whose pruning is refused stays in its resource.
    """
    selected = select_prunable_paths(graph, compiled, summaries)
    result = dict(compiled)
    pruned: dict[str, tuple[Path, ...]] = {}
    for vertex in graph:
        expr = compiled[vertex]
        owned = sorted(
            written_paths(expr) & selected,
            key=lambda path: (-len(path.segments), path),
        )
        done: list[Path] = []
        for path in owned:
            try:
                expr = prune(path, expr)
            except PruneInapplicable as exc:
                logger.debug(
                    "prune_refused", resource=vertex, path=str(path), reason=exc.reason
                )
                continue
            done.append(path)
        result[vertex] = expr
        if done:
            pruned[vertex] = tuple(sorted(done))
    logger.info(
        "paths_pruned",
        selected=len(selected),
        pruned=sum(len(paths) for paths in pruned.values()),
    )
    return PruneResult(compiled=result, pruned=pruned)
