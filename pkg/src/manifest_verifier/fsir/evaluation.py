"""
Concrete semantics of the filesystem IR.
"""

from __future__ import annotations

from typing import assert_never

from .filesystem import DIR, ERR, EvalResult, File, FileSystem, Ok
from .paths import Path
from .syntax import (
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

__all__ = ["eval_pred", "evaluate", "run_sequence"]


def eval_pred(pred: FsPred, fs: FileSystem) -> bool:
    match pred:
        case DoesNotExist(path):
            return path not in fs
        case IsFile(path):
            return isinstance(fs.get(path), File)
        case IsDir(path):
            return fs.get(path) == DIR
        case IsEmptyDir(path):
            return fs.get(path) == DIR and not fs.has_children(path)
        case TruePred():
            return True
        case FalsePred():
            return False
        case Or(left, right):
            return eval_pred(left, fs) or eval_pred(right, fs)
        case And(left, right):
            return eval_pred(left, fs) and eval_pred(right, fs)
        case Not(operand):
            return not eval_pred(operand, fs)
        case _:  # pragma: no cover
            assert_never(pred)


def _can_create(path: Path, fs: FileSystem) -> bool:
    return not path.is_root and fs.get(path.parent) == DIR and path not in fs


def evaluate(expr: FsExpr, fs: FileSystem) -> EvalResult:
    """
    Run ``expr`` on ``fs``.

    Side conditions that do not hold produce :data:`ERR`; nothing is raised.
    Operations on the root path always fail.
    """
    match expr:
        case Skip():
            return Ok(fs)
        case Error():
            return ERR
        case Mkdir(path):
            return Ok(fs.set(path, DIR)) if _can_create(path, fs) else ERR
        case CreateFile(path, content):
            return Ok(fs.set(path, File(content))) if _can_create(path, fs) else ERR
        case Rm(path):
            match fs.get(path):
                case File() if not path.is_root:
                    return Ok(fs.remove(path))
                case value if (
                    value == DIR and not path.is_root and not fs.has_children(path)
                ):
                    return Ok(fs.remove(path))
                case _:
                    return ERR
        case Cp(src, dst):
            source = fs.get(src)
            if not isinstance(source, File) or not _can_create(dst, fs):
                return ERR
            return Ok(fs.set(dst, source))
        case Seq(first, second):
            match evaluate(first, fs):
                case Ok(intermediate):
                    return evaluate(second, intermediate)
                case _:
                    return ERR
        case If(cond, then, orelse):
            return evaluate(then if eval_pred(cond, fs) else orelse, fs)
        case _:  # pragma: no cover
            assert_never(expr)


def run_sequence(exprs: list[FsExpr], fs: FileSystem) -> EvalResult:
    result: EvalResult = Ok(fs)
    for expr in exprs:
        match result:
            case Ok(current):
                result = evaluate(expr, current)
            case _:
                return ERR
    return result
