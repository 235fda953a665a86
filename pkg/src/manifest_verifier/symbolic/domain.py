"""
Bounding the paths and contents a symbolic query has to model.

Expressions only observe the paths they mention, with one exception: removing a
directory and testing it for emptiness depend on whether it has any children at
all. A single fresh child per such directory stands in for all of them.
"""

from __future__ import annotations

from collections.abc import Collection, Iterable

from manifest_verifier.fsir.paths import Path, parent_closure
from manifest_verifier.fsir.syntax import (
    And,
    Cp,
    FsExpr,
    FsPred,
    If,
    IsEmptyDir,
    Not,
    Or,
    Rm,
    contents_of,
    iter_exprs,
    mentioned_paths,
)

__all__ = [
    "FRESH_CONTENT_PREFIX",
    "FRESH_SEGMENT",
    "content_alphabet",
    "dom_bound",
    "listed_directories",
    "listed_in_pred",
]

FRESH_SEGMENT = "⋆"
FRESH_CONTENT_PREFIX = "?"


def listed_in_pred(pred: FsPred) -> Iterable[Path]:
    """
    The paths whose emptiness ``pred`` tests.
    """
    match pred:
        case IsEmptyDir(path):
            yield path
        case Not(operand):
            yield from listed_in_pred(operand)
        case And(left, right) | Or(left, right):
            yield from listed_in_pred(left)
            yield from listed_in_pred(right)


def listed_directories(expr: FsExpr) -> set[Path]:
    """
    The paths whose children ``expr`` observes, through ``Rm`` or ``IsEmptyDir``.
    """
    listed: set[Path] = set()
    for node in iter_exprs(expr):
        match node:
            case Rm(path):
                listed.add(path)
            case If(cond, _, _):
                listed.update(listed_in_pred(cond))
    return listed


def _fresh_child(directory: Path, taken: Collection[Path]) -> Path:
    index = 0
    while (candidate := directory.child(f"{FRESH_SEGMENT}{index}")) in taken:
        index += 1
    return candidate


def dom_bound(*exprs: FsExpr, extra: Iterable[Path] = ()) -> frozenset[Path]:
    """
    The parent-closed set of paths a query over ``exprs`` must model.

    Every mentioned path is included, plus one fresh child of every directory whose
    children are observed. The fresh child is chosen once per directory, so it is
    shared by all expressions of the query.
    """
    paths: set[Path] = set(extra)
    listed: set[Path] = set()
    for expr in exprs:
        paths.update(mentioned_paths(expr))
        listed.update(listed_directories(expr))
    for directory in sorted(listed):
        paths.add(_fresh_child(directory, paths))
    return parent_closure(paths)


def content_alphabet(*exprs: FsExpr, extra: Iterable[str] = ()) -> list[str]:
    """
    The content-ids of a query: every content written by ``exprs`` plus fresh
    tokens for the unknown contents input files may have.

    One fresh token per distinct copy source (at least one), so copies from
    different unknown files can be told apart.
    """
    literals: set[str] = set(extra)
    sources: set[Path] = set()
    for expr in exprs:
        literals.update(contents_of(expr))
        sources.update(node.src for node in iter_exprs(expr) if isinstance(node, Cp))
    fresh: list[str] = []
    index = 0
    while len(fresh) < max(1, len(sources)):
        token = f"{FRESH_CONTENT_PREFIX}{index}"
        if token not in literals:
            fresh.append(token)
        index += 1
    return sorted(literals) + fresh
