"""
Tokenizer for the manifest subset.

Comments (``# ...`` and ``/* ... */``) and whitespace are skipped. Strings are
decoded here, so double-quoted strings arrive at the parser with their
interpolation holes already split out.
"""

from __future__ import annotations

import re
from collections.abc import Iterator
from dataclasses import dataclass
from enum import StrEnum

from .exceptions import ManifestSyntaxError, UnsupportedFeature
from .syntax import Interpolation, Position, Str

__all__ = ["Token", "TokenKind", "tokenize"]


class TokenKind(StrEnum):
    name = "name"
    type_name = "type name"
    variable = "variable"
    string = "string"
    number = "number"
    lbrace = "'{'"
    rbrace = "'}'"
    lbracket = "'['"
    rbracket = "']'"
    lparen = "'('"
    rparen = "')'"
    colon = "':'"
    comma = "','"
    semicolon = "';'"
    fat_arrow = "'=>'"
    equals = "'='"
    right_arrow = "'->'"
    left_arrow = "'<-'"
    eof = "end of input"


@dataclass(frozen=True, slots=True)
class Token:
    kind: TokenKind
    text: str
    position: Position
    value: Str | int | float | str | None = None


_IDENTIFIER = r"[a-z_][a-z0-9_]*"
_TYPE_IDENTIFIER = r"[A-Z][A-Za-z0-9_]*"

_TOKEN_RE = re.compile(
    rf"""
    (?P<whitespace>[ \t\r\n]+)
    |(?P<line_comment>\#[^\n]*)
    |(?P<block_comment>/\*.*?\*/)
    |(?P<collector><<\||<\||\|>>|\|>)
    |(?P<notify_arrow>~>|<~)
    |(?P<fat_arrow>=>)
    |(?P<right_arrow>->)
    |(?P<left_arrow><-)
    |(?P<number>-?\d+(?:\.\d+)?)
    |(?P<variable>\$(?:::)?{_IDENTIFIER}(?:::{_IDENTIFIER})*)
    |(?P<name>{_IDENTIFIER}(?:::{_IDENTIFIER})*)
    |(?P<type_name>{_TYPE_IDENTIFIER}(?:::{_TYPE_IDENTIFIER})*)
    |(?P<punct>[{{}}\[\]():,;=])
    |(?P<quote>["'])
    """,
    re.VERBOSE | re.DOTALL,
)

_PUNCTUATION = {
    "{": TokenKind.lbrace,
    "}": TokenKind.rbrace,
    "[": TokenKind.lbracket,
    "]": TokenKind.rbracket,
    "(": TokenKind.lparen,
    ")": TokenKind.rparen,
    ":": TokenKind.colon,
    ",": TokenKind.comma,
    ";": TokenKind.semicolon,
    "=": TokenKind.equals,
}

_DOUBLE_QUOTED_ESCAPES = {
    "n": "\n",
    "t": "\t",
    "r": "\r",
    "s": " ",
    "\\": "\\",
    '"': '"',
    "'": "'",
    "$": "$",
}

_INTERPOLATION_NAME_RE = re.compile(r"(?:::)?[A-Za-z_][A-Za-z0-9_]*")


class _Lexer:
    def __init__(self, source: str):
        self.source = source
        self.offset = 0

    def position_at(self, offset: int) -> Position:
        line = self.source.count("\n", 0, offset) + 1
        line_start = self.source.rfind("\n", 0, offset) + 1
        return Position(line=line, column=offset - line_start + 1)

    def tokens(self) -> Iterator[Token]:
        source = self.source
        while self.offset < len(source):
            start = self.offset
            position = self.position_at(start)
            token_match = _TOKEN_RE.match(source, start)
            if token_match is None:
                if source.startswith("/*", start):
                    raise ManifestSyntaxError("Unterminated comment", position)
                raise ManifestSyntaxError(
                    f"Unexpected character {source[start]!r}", position
                )

            kind = token_match.lastgroup
            text = token_match.group()
            self.offset = token_match.end()
            match kind:
                case "whitespace" | "line_comment" | "block_comment":
                    continue
                case "collector":
                    raise UnsupportedFeature(
                        "Resource collectors are not supported", position
                    )
                case "notify_arrow":
                    raise UnsupportedFeature(
                        "Notification chains are not supported", position
                    )
                case "fat_arrow":
                    yield Token(TokenKind.fat_arrow, text, position)
                case "right_arrow":
                    yield Token(TokenKind.right_arrow, text, position)
                case "left_arrow":
                    yield Token(TokenKind.left_arrow, text, position)
                case "number":
                    value = float(text) if "." in text else int(text)
                    yield Token(TokenKind.number, text, position, value)
                case "variable":
                    yield Token(
                        TokenKind.variable, text, position, text[1:].lstrip(":")
                    )
                case "name":
                    yield Token(TokenKind.name, text, position, text)
                case "type_name":
                    yield Token(TokenKind.type_name, text, position, text)
                case "punct":
                    yield Token(_PUNCTUATION[text], text, position)
                case "quote":
                    yield self._string(text, start, position)

        yield Token(TokenKind.eof, "", self.position_at(len(source)))

    def _string(self, quote: str, start: int, position: Position) -> Token:
        source = self.source
        index = start + 1
        parts: list[str | Interpolation] = []
        buffer: list[str] = []

        def flush():
            if buffer:
                parts.append("".join(buffer))
                buffer.clear()

        while True:
            if index >= len(source):
                raise ManifestSyntaxError("Unterminated string literal", position)
            char = source[index]
            if char == quote:
                index += 1
                break
            if char == "\\" and index + 1 < len(source):
                escaped = source[index + 1]
                if quote == "'":
                    buffer.append(escaped if escaped in "\\'" else char + escaped)
                else:
                    buffer.append(_DOUBLE_QUOTED_ESCAPES.get(escaped, char + escaped))
                index += 2
                continue
            if char == "$" and quote == '"':
                if source.startswith("{", index + 1):
                    end = source.find("}", index + 2)
                    name = source[index + 2 : end] if end != -1 else ""
                    if not _INTERPOLATION_NAME_RE.fullmatch(name.removeprefix("$")):
                        raise UnsupportedFeature(
                            "Only plain variables can be interpolated",
                            self.position_at(index),
                        )
                    flush()
                    parts.append(Interpolation(name.removeprefix("$").lstrip(":")))
                    index = end + 1
                    continue
                name_match = _INTERPOLATION_NAME_RE.match(source, index + 1)
                if name_match:
                    flush()
                    parts.append(Interpolation(name_match.group().lstrip(":")))
                    index = name_match.end()
                    continue
            buffer.append(char)
            index += 1

        flush()
        self.offset = index
        value = Str(tuple(parts) if parts else ("",))
        return Token(TokenKind.string, source[start:index], position, value)


def tokenize(source: str) -> list[Token]:
    """
    Split ``source`` into tokens, ending with a single EOF token.

    :raises ManifestSyntaxError: on malformed input.
    :raises UnsupportedFeature: on collectors and notification arrows.
    """
    return list(_Lexer(source).tokens())
