"""
SMT-LIB 2 text for filesystem queries.

Terms are plain strings of SMT-LIB syntax. The helpers fold constants and
compare ground constructor terms, so scripts stay small and rendering is
deterministic: the same query always produces the same text.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

from manifest_verifier.utils.sexpr import quote

__all__ = [
    "CONTENT_SORT",
    "DIR",
    "DNE",
    "FALSE",
    "NODE_SORT",
    "SmtScript",
    "Term",
    "TRUE",
    "and_",
    "eq",
    "file_of",
    "is_file",
    "is_ground",
    "ite",
    "not_",
    "or_",
]

type Term = str

TRUE: Term = "true"
FALSE: Term = "false"
DIR: Term = "dir"
DNE: Term = "dne"

NODE_SORT = "Node"
CONTENT_SORT = "Content"


def file_of(content: Term) -> Term:
    return f"(file {content})"


def is_ground(term: Term) -> bool:
    # constructor terms over content constants, e.g. ``dir`` or ``(file c_2)``
    return term in (DIR, DNE) or (
        term.startswith("(file c_") and term.count("(") == 1
    )


def and_(*terms: Term) -> Term:
    operands: list[Term] = []
    for term in terms:
        if term == FALSE:
            return FALSE
        if term != TRUE and term not in operands:
            operands.append(term)
    match operands:
        case []:
            return TRUE
        case [single]:
            return single
        case _:
            return f"(and {' '.join(operands)})"


def or_(*terms: Term) -> Term:
    operands: list[Term] = []
    for term in terms:
        if term == TRUE:
            return TRUE
        if term != FALSE and term not in operands:
            operands.append(term)
    match operands:
        case []:
            return FALSE
        case [single]:
            return single
        case _:
            return f"(or {' '.join(operands)})"


def not_(term: Term) -> Term:
    if term == TRUE:
        return FALSE
    if term == FALSE:
        return TRUE
    return f"(not {term})"


def eq(left: Term, right: Term) -> Term:
    if left == right:
        return TRUE
    if is_ground(left) and is_ground(right):
        return FALSE
    return f"(= {left} {right})"


def is_file(term: Term) -> Term:
    if is_ground(term):
        return TRUE if term.startswith("(file ") else FALSE
    return f"((_ is file) {term})"


def ite(cond: Term, then: Term, orelse: Term) -> Term:
    if cond == TRUE or then == orelse:
        return then
    if cond == FALSE:
        return orelse
    if (then, orelse) == (TRUE, FALSE):
        return cond
    if (then, orelse) == (FALSE, TRUE):
        return not_(cond)
    return f"(ite {cond} {then} {orelse})"


@dataclass
class SmtScript:
    """
    A complete query: declarations, definitions, assertions and ``check-sat``.
    """

    kind: str
    contents: Sequence[tuple[Term, str]]
    inputs: Sequence[tuple[Term, str]]
    constants: Sequence[tuple[Term, str]]
    definitions: Sequence[tuple[Term, str, Term]]
    assertions: list[Term] = field(default_factory=list)

    def render(self, logic: str) -> str:
        lines = [
            f"; manifest-verifier {self.kind} query",
            "(set-option :produce-models true)",
            f"(set-logic {logic})",
        ]
        lines.extend(self._declare_sorts())
        for name, path in self.inputs:
            lines.append(f"(declare-const {name} {NODE_SORT}) ; {quote(path)}")
        for name, sort in self.constants:
            lines.append(f"(declare-const {name} {sort})")
        for name, sort, body in self.definitions:
            lines.append(f"(define-fun {name} () {sort} {body})")
        lines.extend(f"(assert {assertion})" for assertion in self.assertions)
        lines.append("(check-sat)")
        return "\n".join(lines) + "\n"

    def _declare_sorts(self) -> Iterable[str]:
        constructors = " ".join(f"({name})" for name, _ in self.contents)
        yield f"(declare-datatypes (({CONTENT_SORT} 0)) (({constructors})))"
        for name, content in self.contents:
            yield f"; {name} = {quote(content)}"
        yield (
            f"(declare-datatypes (({NODE_SORT} 0)) "
            f"(((dir) (dne) (file (content {CONTENT_SORT})))))"
        )
        if len(self.contents) > 1:
            names = " ".join(name for name, _ in self.contents)
            yield f"(assert (distinct {names}))"

    @property
    def input_names(self) -> list[Term]:
        return [name for name, _ in self.inputs]
