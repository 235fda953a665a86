"""
A small S-expression reader and writer.

Used for the textual form of the filesystem IR and for parsing the responses of
SMT-LIB solvers. Lists are read as tuples, bare words as :class:`Symbol` and
double-quoted text as :class:`String`.
"""

from __future__ import annotations

from collections.abc import Iterator
from dataclasses import dataclass

from manifest_verifier.exceptions import VerifierError

__all__ = [
    "SExpr",
    "SExprSyntaxError",
    "String",
    "Symbol",
    "quote",
    "read_all",
    "read_one",
]

_DELIMITERS = frozenset('()";')
_ESCAPES = {"n": "\n", "t": "\t", '"': '"', "\\": "\\"}
_REVERSE_ESCAPES = {value: f"\\{key}" for key, value in _ESCAPES.items()}


@dataclass(frozen=True, slots=True)
class Symbol:
    name: str


@dataclass(frozen=True, slots=True)
class String:
    value: str


type SExpr = Symbol | String | tuple[SExpr, ...]


class SExprSyntaxError(VerifierError):
    def __init__(self, message: str, offset: int):
        self.offset = offset
        super().__init__(f"{message} (at offset {offset})")


def quote(text: str) -> str:
    escaped = "".join(_REVERSE_ESCAPES.get(char, char) for char in text)
    return f'"{escaped}"'


def _tokenize(text: str) -> Iterator[tuple[int, str, str]]:
    """
    Yield ``(offset, kind, value)`` triples, kind being one of ``(``, ``)``,
    ``symbol`` or ``string``.
    """
    index, length = 0, len(text)
    while index < length:
        char = text[index]
        if char.isspace():
            index += 1
        elif char == ";":
            while index < length and text[index] != "\n":
                index += 1
        elif char in "()":
            yield index, char, char
            index += 1
        elif char == '"':
            start, index, chars = index, index + 1, []
            while True:
                if index >= length:
                    raise SExprSyntaxError("Unterminated string", start)
                char = text[index]
                if char == '"':
                    # SMT-LIB escapes a quote by doubling it
                    if text.startswith('""', index):
                        chars.append('"')
                        index += 2
                        continue
                    index += 1
                    break
                if char == "\\" and index + 1 < length and text[index + 1] in _ESCAPES:
                    chars.append(_ESCAPES[text[index + 1]])
                    index += 2
                    continue
                chars.append(char)
                index += 1
            yield start, "string", "".join(chars)
        elif char == "|":
            end = text.find("|", index + 1)
            if end == -1:
                raise SExprSyntaxError("Unterminated quoted symbol", index)
            yield index, "symbol", text[index + 1 : end]
            index = end + 1
        else:
            start = index
            while (
                index < length
                and not text[index].isspace()
                and text[index] not in _DELIMITERS
            ):
                index += 1
            yield start, "symbol", text[start:index]


def read_all(text: str) -> list[SExpr]:
    stack: list[tuple[int, list[SExpr]]] = []
    result: list[SExpr] = []
    for offset, kind, value in _tokenize(text):
        match kind:
            case "(":
                stack.append((offset, []))
                continue
            case ")":
                if not stack:
                    raise SExprSyntaxError("Unbalanced closing parenthesis", offset)
                _, items = stack.pop()
                node: SExpr = tuple(items)
            case "string":
                node = String(value)
            case _:
                node = Symbol(value)
        if stack:
            stack[-1][1].append(node)
        else:
            result.append(node)
    if stack:
        raise SExprSyntaxError("Unbalanced opening parenthesis", stack[-1][0])
    return result


def read_one(text: str) -> SExpr:
    nodes = read_all(text)
    if len(nodes) != 1:
        raise SExprSyntaxError(f"Expected one expression, found {len(nodes)}", 0)
    return nodes[0]
