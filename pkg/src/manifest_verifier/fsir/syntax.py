"""
The filesystem-operation IR: predicates over paths and loop-free expressions.

Resource models compile to these terms. Every term is an immutable value, so
expressions can be shared freely between resources, permutations and queries.
"""

from __future__ import annotations

from collections.abc import Iterator, Sequence
from dataclasses import dataclass
from typing import assert_never

from .paths import Path

__all__ = [
    "And",
    "Cp",
    "CreateFile",
    "DoesNotExist",
    "ERROR",
    "Error",
    "FALSE",
    "FalsePred",
    "FsExpr",
    "FsPred",
    "If",
    "IsDir",
    "IsEmptyDir",
    "IsFile",
    "Mkdir",
    "Not",
    "Or",
    "Rm",
    "SKIP",
    "Seq",
    "Skip",
    "TRUE",
    "TruePred",
    "contents_of",
    "idemdir",
    "idemdir_target",
    "iter_exprs",
    "mentioned_paths",
    "pred_paths",
    "seq",
    "written_paths",
]


# Predicates


@dataclass(frozen=True, slots=True)
class DoesNotExist:
    path: Path


@dataclass(frozen=True, slots=True)
class IsFile:
    path: Path


@dataclass(frozen=True, slots=True)
class IsDir:
    path: Path


@dataclass(frozen=True, slots=True)
class IsEmptyDir:
    path: Path


@dataclass(frozen=True, slots=True)
class TruePred:
    pass


@dataclass(frozen=True, slots=True)
class FalsePred:
    pass


@dataclass(frozen=True, slots=True)
class Or:
    left: FsPred
    right: FsPred


@dataclass(frozen=True, slots=True)
class And:
    left: FsPred
    right: FsPred


@dataclass(frozen=True, slots=True)
class Not:
    operand: FsPred


type FsPred = (
    DoesNotExist | IsFile | IsDir | IsEmptyDir | TruePred | FalsePred | Or | And | Not
)

TRUE = TruePred()
FALSE = FalsePred()


# Expressions


@dataclass(frozen=True, slots=True)
class Skip:
    pass


@dataclass(frozen=True, slots=True)
class Error:
    pass


@dataclass(frozen=True, slots=True)
class Mkdir:
    path: Path


@dataclass(frozen=True, slots=True)
class CreateFile:
    path: Path
    content: str


@dataclass(frozen=True, slots=True)
class Rm:
    path: Path


@dataclass(frozen=True, slots=True)
class Cp:
    src: Path
    dst: Path


@dataclass(frozen=True, slots=True)
class Seq:
    first: FsExpr
    second: FsExpr


@dataclass(frozen=True, slots=True)
class If:
    cond: FsPred
    then: FsExpr
    orelse: FsExpr


type FsExpr = Skip | Error | Mkdir | CreateFile | Rm | Cp | Seq | If

SKIP = Skip()
ERROR = Error()


def seq(*exprs: FsExpr) -> FsExpr:
    """
    Sequence the expressions, dropping :data:`SKIP` and balancing the tree.

    Sequencing is associative, so the balanced tree means the same as the left
    fold while keeping the nesting depth logarithmic for long package models.
    """
    items = [expr for expr in exprs if expr != SKIP]
    return _balanced(items) if items else SKIP


def _balanced(items: Sequence[FsExpr]) -> FsExpr:
    if len(items) == 1:
        return items[0]
    middle = len(items) // 2
    return Seq(_balanced(items[:middle]), _balanced(items[middle:]))


def idemdir(path: Path) -> FsExpr:
    return If(DoesNotExist(path), Mkdir(path), If(IsFile(path), ERROR, SKIP))


def idemdir_target(expr: FsExpr) -> Path | None:
    """
    Return the directory of an :func:`idemdir` expression, ``None`` for anything else.
    """
    match expr:
        case If(
            DoesNotExist(path), Mkdir(target), If(IsFile(other), Error(), Skip())
        ) if path == target == other:
            return path
        case _:
            return None


def iter_exprs(expr: FsExpr) -> Iterator[FsExpr]:
    """
    Yield every sub-expression, pre-order.
    """
    stack = [expr]
    while stack:
        current = stack.pop()
        yield current
        match current:
            case Seq(first, second):
                stack.extend((second, first))
            case If(_, then, orelse):
                stack.extend((orelse, then))


def pred_paths(pred: FsPred) -> set[Path]:
    match pred:
        case DoesNotExist(path) | IsFile(path) | IsDir(path) | IsEmptyDir(path):
            return {path}
        case TruePred() | FalsePred():
            return set()
        case Or(left, right) | And(left, right):
            return pred_paths(left) | pred_paths(right)
        case Not(operand):
            return pred_paths(operand)
        case _:  # pragma: no cover
            assert_never(pred)


def mentioned_paths(expr: FsExpr) -> set[Path]:
    paths: set[Path] = set()
    for node in iter_exprs(expr):
        match node:
            case Mkdir(path) | CreateFile(path, _) | Rm(path):
                paths.add(path)
            case Cp(src, dst):
                paths.update((src, dst))
            case If(cond, _, _):
                paths.update(pred_paths(cond))
    return paths


def written_paths(expr: FsExpr) -> set[Path]:
    paths: set[Path] = set()
    for node in iter_exprs(expr):
        match node:
            case Mkdir(path) | CreateFile(path, _) | Rm(path) | Cp(_, path):
                paths.add(path)
    return paths


def contents_of(expr: FsExpr) -> set[str]:
    return {
        node.content for node in iter_exprs(expr) if isinstance(node, CreateFile)
    }
