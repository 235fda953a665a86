"""
Recursive descent parser for the manifest subset.

Grammar::

    manifest   := item* EOF
    item       := define | chain
    define     := 'define' NAME ['(' [param (',' param)* [',']] ')'] '{' item* '}'
    param      := VARIABLE ['=' value]
    chain      := operand (('->' | '<-') operand)*
    operand    := resource | reference
    resource   := NAME '{' body (';' body)* [';'] '}'
    body       := value ':' [attribute ((',' | ';') attribute)* [',' | ';']]
    attribute  := NAME '=>' value
    value      := STRING | NUMBER | VARIABLE | NAME | reference
                | '[' [value (',' value)* [',']] ']'
    reference  := TYPE_NAME '[' value (',' value)* ']'

A chain operand that declares a resource is emitted as that declaration, and
its reference participates in the chain. ``Type['a', 'b']`` is shorthand for an
array of two references.
"""

from __future__ import annotations

from pathlib import Path

import structlog

from .constants import UNSUPPORTED_KEYWORDS
from .exceptions import DuplicateAttribute, ManifestSyntaxError, UnsupportedFeature
from .lexer import Token, TokenKind, tokenize
from .syntax import (
    Array,
    Attribute,
    DefineDecl,
    DependencyDecl,
    Item,
    Manifest,
    Num,
    Param,
    Ref,
    ResourceDecl,
    Str,
    Value,
    Var,
)

__all__ = ["parse_manifest", "parse_manifest_file"]

logger = structlog.stdlib.get_logger(__name__)


class Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.index = 0

    # Token cursor

    @property
    def current(self) -> Token:
        return self.tokens[self.index]

    def peek(self, offset: int = 1) -> Token:
        return self.tokens[min(self.index + offset, len(self.tokens) - 1)]

    def advance(self) -> Token:
        token = self.current
        if token.kind is not TokenKind.eof:
            self.index += 1
        return token

    def at(self, *kinds: TokenKind) -> bool:
        return self.current.kind in kinds

    def accept(self, kind: TokenKind) -> Token | None:
        if self.current.kind is kind:
            return self.advance()
        return None

    def expect(self, kind: TokenKind, context: str = "") -> Token:
        token = self.current
        if token.kind is not kind:
            found = repr(token.text) if token.text else str(token.kind)
            suffix = f" {context}" if context else ""
            raise ManifestSyntaxError(
                f"Expected {kind}{suffix}, found {found}", token.position
            )
        return self.advance()

    def at_assignment(self) -> bool:
        return self.peek().kind is TokenKind.equals

    # Rules

    def parse_manifest(self) -> Manifest:
        items = self.parse_items(until=TokenKind.eof)
        self.expect(TokenKind.eof)
        return Manifest(items=tuple(items))

    def parse_items(self, until: TokenKind) -> list[Item]:
        items: list[Item] = []
        while not self.at(until, TokenKind.eof):
            token = self.current
            if token.kind is TokenKind.name and token.text == "define":
                items.append(self.parse_define())
            elif token.kind is TokenKind.name and token.text in UNSUPPORTED_KEYWORDS:
                raise UnsupportedFeature(
                    f"'{token.text}' is not supported", token.position
                )
            elif token.kind is TokenKind.variable and self.at_assignment():
                raise UnsupportedFeature(
                    "Variable assignment is not supported", token.position
                )
            else:
                items.extend(self.parse_chain())
        return items

    def parse_define(self) -> DefineDecl:
        keyword = self.advance()
        name = self.expect(TokenKind.name, "after 'define'")
        params: list[Param] = []
        if self.accept(TokenKind.lparen):
            seen: set[str] = set()
            while not self.at(TokenKind.rparen):
                variable = self.expect(TokenKind.variable, "in parameter list")
                if variable.value in seen:
                    raise DuplicateAttribute(
                        f"Duplicate parameter '${variable.value}'", variable.position
                    )
                seen.add(variable.value)
                default = self.parse_value() if self.accept(TokenKind.equals) else None
                params.append(Param(name=variable.value, default=default))
                if not self.accept(TokenKind.comma):
                    break
            self.expect(TokenKind.rparen, "to close parameter list")

        self.expect(TokenKind.lbrace, f"to open define '{name.text}'")
        body = self.parse_items(until=TokenKind.rbrace)
        self.expect(TokenKind.rbrace, f"to close define '{name.text}'")
        return DefineDecl(
            name=name.text,
            params=tuple(params),
            body=Manifest(items=tuple(body)),
            position=keyword.position,
        )

    def parse_chain(self) -> list[Item]:
        items: list[Item] = []
        operands: list[tuple[list[Ref], Token]] = []

        refs, start = self.parse_operand(items)
        operands.append((refs, start))
        while self.at(TokenKind.right_arrow, TokenKind.left_arrow):
            arrow = self.advance()
            refs, start = self.parse_operand(items)
            (previous, _) = operands[-1]
            sources, targets = (
                (previous, refs)
                if arrow.kind is TokenKind.right_arrow
                else (refs, previous)
            )
            for source in sources:
                for target in targets:
                    items.append(
                        DependencyDecl(
                            source=source, target=target, position=arrow.position
                        )
                    )
            operands.append((refs, start))

        if len(operands) == 1 and not any(
            isinstance(item, ResourceDecl) for item in items
        ):
            raise ManifestSyntaxError(
                "A resource reference on its own is not a statement", start.position
            )
        return items

    def parse_operand(self, items: list[Item]) -> tuple[list[Ref], Token]:
        start = self.current
        if start.kind is TokenKind.type_name:
            return self.parse_reference(), start
        if start.kind is TokenKind.lbracket:
            value = self.parse_value()
            refs = value.items if isinstance(value, Array) else ()
            if not refs or not all(isinstance(ref, Ref) for ref in refs):
                raise ManifestSyntaxError(
                    "Only arrays of references can appear in a chain", start.position
                )
            return list(refs), start
        if start.kind is TokenKind.name:
            declarations = self.parse_resource()
            items.extend(declarations)
            refs = [Ref(rtype=decl.rtype, title=decl.title) for decl in declarations]
            return refs, start
        found = repr(start.text) if start.text else str(start.kind)
        raise ManifestSyntaxError(
            f"Expected a resource declaration, found {found}", start.position
        )

    def parse_resource(self) -> list[ResourceDecl]:
        rtype = self.advance()
        if self.at(TokenKind.lparen):
            raise UnsupportedFeature(
                f"Function call '{rtype.text}(...)' is not supported", rtype.position
            )
        self.expect(TokenKind.lbrace, f"after resource type '{rtype.text}'")
        declarations: list[ResourceDecl] = []
        while True:
            declarations.append(self.parse_body(rtype))
            if not self.accept(TokenKind.semicolon) or self.at(TokenKind.rbrace):
                break
        self.expect(TokenKind.rbrace, f"to close '{rtype.text}' declaration")
        return declarations

    def parse_body(self, rtype: Token) -> ResourceDecl:
        title_token = self.current
        title = self.parse_value()
        self.expect(TokenKind.colon, "after resource title")

        attributes: list[Attribute] = []
        seen: set[str] = set()
        while self.at(TokenKind.name) and self.peek().kind is TokenKind.fat_arrow:
            attribute = self.parse_attribute()
            if attribute.name in seen:
                raise DuplicateAttribute(
                    f"Duplicate attribute '{attribute.name}'", attribute.position
                )
            seen.add(attribute.name)
            attributes.append(attribute)
            if self.accept(TokenKind.comma):
                continue
            # ';' separates attributes unless it starts the next body
            if self.at(TokenKind.semicolon) and self.peek().kind is TokenKind.name:
                if self.peek(2).kind is TokenKind.fat_arrow:
                    self.advance()
                    continue
            break

        return ResourceDecl(
            rtype=rtype.text,
            title=title,
            attributes=tuple(attributes),
            position=title_token.position,
        )

    def parse_attribute(self) -> Attribute:
        name = self.advance()
        self.expect(TokenKind.fat_arrow)
        return Attribute(
            name=name.text, value=self.parse_value(), position=name.position
        )

    def parse_reference(self) -> list[Ref]:
        type_name = self.advance()
        self.expect(TokenKind.lbracket, f"after '{type_name.text}'")
        titles = [self.parse_value()]
        while self.accept(TokenKind.comma):
            if self.at(TokenKind.rbracket):
                break
            titles.append(self.parse_value())
        self.expect(TokenKind.rbracket, "to close reference")
        rtype = type_name.text.lower()
        return [Ref(rtype=rtype, title=title) for title in titles]

    def parse_value(self) -> Value:
        token = self.current
        match token.kind:
            case TokenKind.string:
                self.advance()
                assert isinstance(token.value, Str)
                return token.value
            case TokenKind.number:
                self.advance()
                assert isinstance(token.value, int | float)
                return Num(token.value)
            case TokenKind.variable:
                self.advance()
                assert isinstance(token.value, str)
                return Var(token.value)
            case TokenKind.name:
                self.advance()
                return Str.literal(token.text)
            case TokenKind.type_name:
                refs = self.parse_reference()
                return refs[0] if len(refs) == 1 else Array(tuple(refs))
            case TokenKind.lbracket:
                self.advance()
                items: list[Value] = []
                while not self.at(TokenKind.rbracket):
                    items.append(self.parse_value())
                    if not self.accept(TokenKind.comma):
                        break
                self.expect(TokenKind.rbracket, "to close array")
                return Array(tuple(items))
            case TokenKind.lbrace:
                raise UnsupportedFeature("Hashes are not supported", token.position)
            case _:
                found = repr(token.text) if token.text else str(token.kind)
                raise ManifestSyntaxError(
                    f"Expected a value, found {found}", token.position
                )


def parse_manifest(source: str) -> Manifest:
    """
    Parse manifest source text.

    :raises ManifestSyntaxError: with the line and column of the offending token.
    :raises UnsupportedFeature: on constructs outside the supported subset.
    """
    manifest = Parser(tokenize(source)).parse_manifest()
    logger.debug("manifest_parsed", items=len(manifest.items))
    return manifest


def parse_manifest_file(path: Path) -> Manifest:
    return parse_manifest(path.read_text(encoding="utf-8"))
