"""
Syntactic commutativity of filesystem expressions.

Each expression is summarised by how it accesses every path: read, written, or
only created as a directory through the guarded :func:`idemdir` pattern. Two
expressions whose summaries do not overlap in a conflicting way can run in either
order with the same outcome. The check is sufficient, not necessary: a conflict
only means the expressions might not commute.
"""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass, field
from enum import StrEnum
from typing import assert_never

from manifest_verifier.fsir.paths import Path
from manifest_verifier.fsir.syntax import (
    Cp,
    CreateFile,
    Error,
    FsExpr,
    If,
    Mkdir,
    Rm,
    Seq,
    Skip,
    idemdir_target,
    pred_paths,
)
from manifest_verifier.symbolic.domain import listed_directories

__all__ = ["Access", "CommAbsState", "comm_abstract", "commutes"]


class Access(StrEnum):
    READ = "R"
    #: created as a directory if missing, and nothing else
    DIR = "D"
    WRITE = "W"


COMPATIBLE = frozenset({(Access.READ, Access.READ), (Access.DIR, Access.DIR)})


def join(left: Access | None, right: Access | None) -> Access | None:
    if left is None:
        return right
    if right is None or left == right:
        return left
    return Access.WRITE


@dataclass(frozen=True)
class CommAbsState:
    """
    Per-path accesses, absent meaning untouched, plus the directories whose
    children are observed through ``Rm`` or ``IsEmptyDir``.
    """

    access: Mapping[Path, Access] = field(default_factory=dict)
    listed: frozenset[Path] = frozenset()

    def get(self, path: Path) -> Access | None:
        return self.access.get(path)

    @property
    def written(self) -> set[Path]:
        return {
            path
            for path, access in self.access.items()
            if access in (Access.WRITE, Access.DIR)
        }

    def conflicts_with(self, other: CommAbsState) -> set[Path]:
        """
        The paths on which the two summaries may interfere.
        """
        conflicts = {
            path
            for path in self.access.keys() & other.access.keys()
            if (self.access[path], other.access[path]) not in COMPATIBLE
        }
        for first, second in ((self, other), (other, self)):
            for path in second.written:
                if not path.is_root and path.parent in first.listed:
                    conflicts.add(path.parent)
        return conflicts

    def commutes_with(self, other: CommAbsState) -> bool:
        return not self.conflicts_with(other)


type AccessMap = dict[Path, Access]


def _record(state: AccessMap, path: Path, access: Access) -> AccessMap:
    current = state.get(path)
    # after ensuring a directory, every read of it sees a directory
    if current == Access.DIR and access == Access.READ:
        return state
    updated = join(current, access)
    assert updated is not None
    return {**state, path: updated}


def _create(state: AccessMap, path: Path) -> AccessMap:
    state = _record(state, path, Access.WRITE)
    if not path.is_root:
        state = _record(state, path.parent, Access.READ)
    return state


def _is_idempotent_mkdir(state: AccessMap, path: Path) -> bool:
    if path.is_root or state.get(path) not in (None, Access.DIR):
        return False
    # the root cannot be written, so it is as stable as a shared directory
    return path.parent.is_root or state.get(path.parent) == Access.DIR


def _run(expr: FsExpr, state: AccessMap) -> AccessMap:
    target = idemdir_target(expr)
    if target is not None and _is_idempotent_mkdir(state, target):
        return {**state, target: Access.DIR}

    match expr:
        case Skip() | Error():
            return state
        case Mkdir(path) | CreateFile(path, _):
            return _create(state, path)
        case Rm(path):
            return _record(state, path, Access.WRITE)
        case Cp(src, dst):
            return _create(_record(state, src, Access.READ), dst)
        case Seq(first, second):
            return _run(second, _run(first, state))
        case If(cond, then, orelse):
            for path in sorted(pred_paths(cond)):
                state = _record(state, path, Access.READ)
            then_state = _run(then, state)
            else_state = _run(orelse, state)
            merged: AccessMap = {}
            for path in then_state.keys() | else_state.keys():
                access = join(then_state.get(path), else_state.get(path))
                assert access is not None
                merged[path] = access
            return merged
        case _:  # pragma: no cover
            assert_never(expr)


def comm_abstract(expr: FsExpr) -> CommAbsState:
    access = _run(expr, {})
    return CommAbsState(access=access, listed=frozenset(listed_directories(expr)))


def commutes(e1: FsExpr, e2: FsExpr) -> bool:
    """
    Sufficient check that ``Seq(e1, e2)`` and ``Seq(e2, e1)`` are equivalent.
    """
    return comm_abstract(e1).commutes_with(comm_abstract(e2))
