"""
S-expression text form of the IR, e.g. ``(seq (mkdir /a) (create /a/f "c"))``.

Printing is canonical: ``print_expr(parse_expr(text)) == text`` for any printed
text, and ``parse_expr(print_expr(expr)) == expr`` for any expression.
"""

from __future__ import annotations

import re
from typing import assert_never

from manifest_verifier.utils.sexpr import (
    SExpr,
    SExprSyntaxError,
    String,
    Symbol,
    quote,
    read_one,
)

from .exceptions import InvalidPath, IRSyntaxError
from .paths import Path
from .syntax import (
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
)

__all__ = ["parse_expr", "parse_pred", "print_expr", "print_pred"]

_BARE_PATH = re.compile(r'^/[^\s()";|\\]*$')

_PATH_PREDICATES = {
    "dne": DoesNotExist,
    "file?": IsFile,
    "dir?": IsDir,
    "empty-dir?": IsEmptyDir,
}
_PREDICATE_NAMES = {value: key for key, value in _PATH_PREDICATES.items()}


def _print_path(path: Path) -> str:
    text = str(path)
    return text if _BARE_PATH.match(text) else quote(text)


def print_pred(pred: FsPred) -> str:
    match pred:
        case DoesNotExist(path) | IsFile(path) | IsDir(path) | IsEmptyDir(path):
            return f"({_PREDICATE_NAMES[type(pred)]} {_print_path(path)})"
        case TruePred():
            return "true"
        case FalsePred():
            return "false"
        case Or(left, right):
            return f"(or {print_pred(left)} {print_pred(right)})"
        case And(left, right):
            return f"(and {print_pred(left)} {print_pred(right)})"
        case Not(operand):
            return f"(not {print_pred(operand)})"
        case _:  # pragma: no cover
            assert_never(pred)


def print_expr(expr: FsExpr) -> str:
    match expr:
        case Skip():
            return "skip"
        case Error():
            return "error"
        case Mkdir(path):
            return f"(mkdir {_print_path(path)})"
        case CreateFile(path, content):
            return f"(create {_print_path(path)} {quote(content)})"
        case Rm(path):
            return f"(rm {_print_path(path)})"
        case Cp(src, dst):
            return f"(cp {_print_path(src)} {_print_path(dst)})"
        case Seq(first, second):
            return f"(seq {print_expr(first)} {print_expr(second)})"
        case If(cond, then, orelse):
            return f"(if {print_pred(cond)} {print_expr(then)} {print_expr(orelse)})"
        case _:  # pragma: no cover
            assert_never(expr)


def _read(text: str) -> SExpr:
    try:
        return read_one(text)
    except SExprSyntaxError as exc:
        raise IRSyntaxError(exc.message) from exc


def _to_path(node: SExpr) -> Path:
    match node:
        case Symbol(text) | String(text):
            try:
                return Path.parse(text)
            except InvalidPath as exc:
                raise IRSyntaxError(exc.message) from exc
        case _:
            raise IRSyntaxError(f"Expected a path, got {node!r}.")


def _to_pred(node: SExpr) -> FsPred:
    match node:
        case Symbol("true"):
            return TRUE
        case Symbol("false"):
            return FALSE
        case (Symbol(name), path) if name in _PATH_PREDICATES:
            return _PATH_PREDICATES[name](_to_path(path))
        case (Symbol("or"), left, right):
            return Or(_to_pred(left), _to_pred(right))
        case (Symbol("and"), left, right):
            return And(_to_pred(left), _to_pred(right))
        case (Symbol("not"), operand):
            return Not(_to_pred(operand))
        case _:
            raise IRSyntaxError(f"Malformed predicate {node!r}.")


def _to_expr(node: SExpr) -> FsExpr:
    match node:
        case Symbol("skip"):
            return SKIP
        case Symbol("error"):
            return ERROR
        case (Symbol("mkdir"), path):
            return Mkdir(_to_path(path))
        case (Symbol("create"), path, String(content)):
            return CreateFile(_to_path(path), content)
        case (Symbol("rm"), path):
            return Rm(_to_path(path))
        case (Symbol("cp"), src, dst):
            return Cp(_to_path(src), _to_path(dst))
        case (Symbol("seq"), first, second):
            return Seq(_to_expr(first), _to_expr(second))
        case (Symbol("if"), cond, then, orelse):
            return If(_to_pred(cond), _to_expr(then), _to_expr(orelse))
        case _:
            raise IRSyntaxError(f"Malformed expression {node!r}.")


def parse_pred(text: str) -> FsPred:
    return _to_pred(_read(text))


def parse_expr(text: str) -> FsExpr:
    return _to_expr(_read(text))
