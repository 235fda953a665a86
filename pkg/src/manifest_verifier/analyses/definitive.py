"""
Definitive writes: paths that end in one fixed state on every successful run.

The analysis tracks what is known about each path along the way. A path nobody
wrote still holds its input value, of which only the kinds allowed by the guards
passed so far are known. Branches ending in an error do not contribute, so the
guarded writes produced by the resource models (``idemdir`` among them) register
as definitive.
"""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass, field
from enum import StrEnum
from functools import partial
from typing import assert_never

from manifest_verifier.fsir.filesystem import DIR, File, FileContent
from manifest_verifier.fsir.paths import Path
from manifest_verifier.fsir.syntax import (
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
)

__all__ = [
    "DNE",
    "TOP",
    "UNTOUCHED",
    "Absent",
    "DefWrite",
    "DefWriteAbsState",
    "Kind",
    "Known",
    "PathValue",
    "Top",
    "Untouched",
    "defwrite_abstract",
    "merge_values",
    "pred_truth",
    "refine",
]


class Kind(StrEnum):
    DNE = "dne"
    DIR = "dir"
    FILE = "file"


ALL_KINDS = frozenset(Kind)


@dataclass(frozen=True, slots=True)
class Untouched:
    """
    The input value, known to be of one of ``kinds``.
    """

    kinds: frozenset[Kind] = ALL_KINDS


@dataclass(frozen=True, slots=True)
class Known:
    kind: Kind
    #: the content of a file, ``None`` when it is not known
    content: str | None = None


@dataclass(frozen=True, slots=True)
class Top:
    def __repr__(self) -> str:
        return "⊤"


@dataclass(frozen=True, slots=True)
class Absent:
    def __repr__(self) -> str:
        return "DNE"


TOP = Top()
DNE = Absent()
UNTOUCHED = Untouched()

type PathValue = Untouched | Known | Top
type DefWrite = FileContent | Absent | Top


def merge_values(left: PathValue, right: PathValue) -> PathValue:
    """
    The value of a path after two branches meet.
    """
    if left == right:
        return left
    match left, right:
        case Untouched(first), Untouched(second):
            return Untouched(first | second)
        case (Known(kind, _), Untouched(kinds)) | (Untouched(kinds), Known(kind, _)):
            # an untouched input of a single kind is as good as a write of it
            if kinds == {kind}:
                return Known(kind)
            return TOP
        case Known(Kind.FILE, _), Known(Kind.FILE, _):
            return Known(Kind.FILE)
        case _:
            return TOP


def _kinds(value: PathValue) -> frozenset[Kind] | None:
    match value:
        case Untouched(kinds):
            return kinds
        case Known(kind, _):
            return frozenset({kind})
        case Top():
            return None


def _atom_truth(kinds: frozenset[Kind] | None, holds_for: Kind) -> bool | None:
    if kinds is None:
        return None
    if kinds == {holds_for}:
        return True
    if holds_for not in kinds:
        return False
    return None


def pred_truth(pred: FsPred, value_of) -> bool | None:
    """
    Evaluate ``pred`` as far as the path values returned by ``value_of`` allow.
    """
    match pred:
        case TruePred():
            return True
        case FalsePred():
            return False
        case DoesNotExist(path):
            return _atom_truth(_kinds(value_of(path)), Kind.DNE)
        case IsFile(path):
            return _atom_truth(_kinds(value_of(path)), Kind.FILE)
        case IsDir(path):
            return _atom_truth(_kinds(value_of(path)), Kind.DIR)
        case IsEmptyDir(path):
            kinds = _kinds(value_of(path))
            if kinds is not None and Kind.DIR not in kinds:
                return False
            return None
        case Not(operand):
            truth = pred_truth(operand, value_of)
            return None if truth is None else not truth
        case And(left, right):
            first, second = pred_truth(left, value_of), pred_truth(right, value_of)
            if first is False or second is False:
                return False
            if first and second:
                return True
            return None
        case Or(left, right):
            first, second = pred_truth(left, value_of), pred_truth(right, value_of)
            if first or second:
                return True
            if first is False and second is False:
                return False
            return None
        case _:  # pragma: no cover
            assert_never(pred)


def refine(pred: FsPred, holds: bool) -> tuple[Path, frozenset[Kind]] | None:
    """
    The kinds a path can have when the atomic ``pred`` evaluates to ``holds``.
    """
    match pred:
        case Not(operand):
            return refine(operand, not holds)
        case DoesNotExist(path):
            kind = Kind.DNE
        case IsFile(path):
            kind = Kind.FILE
        case IsDir(path):
            kind = Kind.DIR
        case IsEmptyDir(path) if holds:
            return path, frozenset({Kind.DIR})
        case _:
            return None
    return path, frozenset({kind}) if holds else ALL_KINDS - {kind}


type State = dict[Path, PathValue]


def _value(state: State, path: Path) -> PathValue:
    return state.get(path, UNTOUCHED)


def _restrict(state: State, pred: FsPred, holds: bool) -> State | None:
    if (refinement := refine(pred, holds)) is None:
        return state
    path, allowed = refinement
    match _value(state, path):
        case Untouched(kinds):
            if not kinds & allowed:
                return None
            return {**state, path: Untouched(kinds & allowed)}
        case _:
            return state


def _may_hold(state: State, pred: FsPred) -> bool:
    return pred_truth(pred, partial(_value, state)) is not False


def _can_create(state: State, path: Path) -> bool:
    if path.is_root:
        return False
    return _may_hold(state, And(IsDir(path.parent), DoesNotExist(path)))


def _run(expr: FsExpr, state: State) -> State | None:
    match expr:
        case Skip():
            return state
        case Error():
            return None
        case Mkdir(path):
            if not _can_create(state, path):
                return None
            return {**state, path: Known(Kind.DIR)}
        case CreateFile(path, content):
            if not _can_create(state, path):
                return None
            return {**state, path: Known(Kind.FILE, content)}
        case Rm(path):
            if path.is_root or not _may_hold(state, Not(DoesNotExist(path))):
                return None
            return {**state, path: Known(Kind.DNE)}
        case Cp(src, dst):
            source = _value(state, src)
            if src == dst or not _can_create(state, dst):
                return None
            if not _may_hold(state, IsFile(src)):
                return None
            content = source.content if isinstance(source, Known) else None
            return {**state, dst: Known(Kind.FILE, content)}
        case Seq(first, second):
            middle = _run(first, state)
            return None if middle is None else _run(second, middle)
        case If(cond, then, orelse):
            truth = pred_truth(cond, partial(_value, state))
            then_state = _restrict(state, cond, True) if truth is not False else None
            else_state = _restrict(state, cond, False) if truth is not True else None
            return _merge(
                None if then_state is None else _run(then, then_state),
                None if else_state is None else _run(orelse, else_state),
            )
        case _:  # pragma: no cover
            assert_never(expr)


def _merge(left: State | None, right: State | None) -> State | None:
    if left is None:
        return right
    if right is None:
        return left
    return {
        path: merge_values(_value(left, path), _value(right, path))
        for path in left.keys() | right.keys()
    }


def _export(value: PathValue) -> DefWrite | None:
    match value:
        case Untouched():
            return None
        case Known(Kind.DIR, _):
            return DIR
        case Known(Kind.DNE, _):
            return DNE
        case Known(Kind.FILE, str() as content):
            return File(content)
        case _:
            return TOP


@dataclass(frozen=True)
class DefWriteAbsState:
    """
    The final value of every written path; unwritten paths are absent.
    """

    values: Mapping[Path, DefWrite] = field(default_factory=dict)

    def get(self, path: Path) -> DefWrite | None:
        return self.values.get(path)

    def definitive(self, path: Path) -> DefWrite | None:
        """
        The value ``path`` always ends with, ``None`` unless it is definite.
        """
        value = self.values.get(path)
        return None if value is None or value == TOP else value

    @property
    def definitive_paths(self) -> set[Path]:
        return {path for path, value in self.values.items() if value != TOP}


def defwrite_abstract(expr: FsExpr) -> DefWriteAbsState:
    state = _run(expr, {})
    if state is None:
        return DefWriteAbsState()
    values = {path: _export(value) for path, value in state.items()}
    return DefWriteAbsState(
        {path: value for path, value in values.items() if value is not None}
    )
