"""
Logical encoding of filesystem expressions.

A logical state pairs an ``ok`` formula with one ``Node`` term per path of the
query domain. Running an expression on a logical state produces a new state
whose terms are expressed over the shared input variables. Compound terms are
bound to named definitions, hash-consed on their body, so nested conditionals
and long sequences keep the script linear in the size of the expression and
structurally identical states get identical terms.
"""

from __future__ import annotations

from collections.abc import Collection, Iterable, Mapping, Sequence
from dataclasses import dataclass
from typing import assert_never

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

from .exceptions import MissingPath
from .smtlib import (
    DIR,
    DNE,
    FALSE,
    NODE_SORT,
    TRUE,
    SmtScript,
    Term,
    and_,
    eq,
    file_of,
    is_file,
    is_ground,
    ite,
    not_,
    or_,
)

__all__ = ["Encoder", "LogicalState"]


@dataclass(frozen=True)
class LogicalState:
    """
    ``fs`` is only meaningful where ``ok`` holds.
    """

    ok: Term
    fs: Mapping[Path, Term]

    @property
    def key(self) -> tuple[Term, tuple[Term, ...]]:
        return self.ok, tuple(self.fs[path] for path in sorted(self.fs))


class Encoder:
    """
    The encoding context of one query: its domain, content alphabet and the
    definitions introduced so far.
    """

    def __init__(self, domain: Collection[Path], contents: Sequence[str]):
        self.domain: list[Path] = sorted(domain)
        self.contents = list(contents)
        self.content_terms = {
            content: f"c_{index}" for index, content in enumerate(self.contents)
        }
        self.inputs = {path: f"in_{index}" for index, path in enumerate(self.domain)}
        self._children: dict[Path, list[Path]] = {path: [] for path in self.domain}
        for path in self.domain:
            if not path.is_root and path.parent in self._children:
                self._children[path.parent].append(path)
        self._definitions: list[tuple[Term, str, Term]] = []
        self._cache: dict[tuple[str, Term], Term] = {}
        self._constants: list[tuple[Term, str]] = []

    def define(self, sort: str, body: Term) -> Term:
        """
        Name ``body``, reusing the name of an identical earlier definition.
        """
        if " " not in body or is_ground(body):
            return body
        key = (sort, body)
        if (name := self._cache.get(key)) is None:
            prefix = "b" if sort == "Bool" else "n"
            name = f"{prefix}_{len(self._definitions)}"
            self._definitions.append((name, sort, body))
            self._cache[key] = name
        return name

    def constant(self, sort: str, prefix: str) -> Term:
        """
        Declare a fresh unconstrained constant.
        """
        name = f"{prefix}_{len(self._constants)}"
        self._constants.append((name, sort))
        return name

    def content(self, content: str) -> Term:
        return self.content_terms[content]

    def input_state(self) -> LogicalState:
        return LogicalState(ok=TRUE, fs=dict(self.inputs))

    def tree_closure(self) -> list[Term]:
        """
        Constraints making the input a tree: every present non-root path has a
        directory as its parent.
        """
        return [
            or_(eq(self.inputs[path], DNE), eq(self.inputs[path.parent], DIR))
            for path in self.domain
            if not path.is_root
        ]

    def _lookup(self, fs: Mapping[Path, Term], path: Path) -> Term:
        try:
            return fs[path]
        except KeyError:
            raise MissingPath(path) from None

    def _children_absent(self, fs: Mapping[Path, Term], path: Path) -> Term:
        if path not in self._children:
            raise MissingPath(path)
        return and_(*(eq(fs[child], DNE) for child in self._children[path]))

    def encode_pred(self, pred: FsPred, fs: Mapping[Path, Term]) -> Term:
        match pred:
            case DoesNotExist(path):
                return eq(self._lookup(fs, path), DNE)
            case IsFile(path):
                return is_file(self._lookup(fs, path))
            case IsDir(path):
                return eq(self._lookup(fs, path), DIR)
            case IsEmptyDir(path):
                return and_(
                    eq(self._lookup(fs, path), DIR), self._children_absent(fs, path)
                )
            case TruePred():
                return TRUE
            case FalsePred():
                return FALSE
            case Or(left, right):
                return or_(self.encode_pred(left, fs), self.encode_pred(right, fs))
            case And(left, right):
                return and_(self.encode_pred(left, fs), self.encode_pred(right, fs))
            case Not(operand):
                return not_(self.encode_pred(operand, fs))
            case _:  # pragma: no cover
                assert_never(pred)

    def _can_create(self, fs: Mapping[Path, Term], path: Path) -> Term:
        if path.is_root:
            return FALSE
        return and_(
            eq(self._lookup(fs, path.parent), DIR), eq(self._lookup(fs, path), DNE)
        )

    def _step(
        self, expr: FsExpr, fs: Mapping[Path, Term]
    ) -> tuple[Term, Mapping[Path, Term]]:
        match expr:
            case Skip():
                return TRUE, fs
            case Error():
                return FALSE, fs
            case Mkdir(path):
                return self._can_create(fs, path), {**fs, path: DIR}
            case CreateFile(path, content):
                written = file_of(self.content(content))
                return self._can_create(fs, path), {**fs, path: written}
            case Rm(path):
                current = self._lookup(fs, path)
                ok = FALSE
                if not path.is_root:
                    ok = or_(
                        is_file(current),
                        and_(eq(current, DIR), self._children_absent(fs, path)),
                    )
                return ok, {**fs, path: DNE}
            case Cp(src, dst):
                source = self._lookup(fs, src)
                ok = and_(is_file(source), self._can_create(fs, dst))
                return ok, {**fs, dst: source}
            case Seq(first, second):
                first_ok, middle = self._step(first, fs)
                if first_ok == FALSE:
                    return FALSE, fs
                second_ok, after = self._step(second, middle)
                return self.define("Bool", and_(first_ok, second_ok)), after
            case If(cond, then, orelse):
                guard = self.define("Bool", self.encode_pred(cond, fs))
                if guard == TRUE:
                    return self._step(then, fs)
                if guard == FALSE:
                    return self._step(orelse, fs)
                then_ok, then_fs = self._step(then, fs)
                else_ok, else_fs = self._step(orelse, fs)
                merged = dict(fs)
                for path in then_fs.keys() | else_fs.keys():
                    before = fs.get(path)
                    left, right = then_fs.get(path, before), else_fs.get(path, before)
                    if left is None or right is None:
                        raise MissingPath(path)
                    merged[path] = self.define(NODE_SORT, ite(guard, left, right))
                return self.define("Bool", ite(guard, then_ok, else_ok)), merged
            case _:  # pragma: no cover
                assert_never(expr)

    def encode_ok(self, expr: FsExpr, state: LogicalState) -> Term:
        ok, _ = self._step(expr, state.fs)
        return ok

    def encode_step(self, expr: FsExpr, state: LogicalState) -> LogicalState:
        ok, fs = self._step(expr, state.fs)
        for path in fs:
            if path not in self.inputs:
                raise MissingPath(path)
        return LogicalState(ok=self.define("Bool", and_(state.ok, ok)), fs=fs)

    def states_differ(self, first: LogicalState, second: LogicalState) -> Term:
        """
        Both states are successful and some path differs.
        """
        return and_(
            first.ok,
            second.ok,
            or_(*(not_(eq(first.fs[path], second.fs[path])) for path in self.domain)),
        )

    def script(self, kind: str, assertions: Iterable[Term]) -> SmtScript:
        return SmtScript(
            kind=kind,
            contents=[
                (self.content_terms[content], content) for content in self.contents
            ],
            inputs=[(self.inputs[path], str(path)) for path in self.domain],
            constants=list(self._constants),
            definitions=list(self._definitions),
            assertions=[*self.tree_closure(), *assertions],
        )
