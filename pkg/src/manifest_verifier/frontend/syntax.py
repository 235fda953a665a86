"""
Abstract syntax of the supported manifest subset.
"""

from __future__ import annotations

from dataclasses import dataclass, field

__all__ = [
    "Array",
    "Attribute",
    "DefineDecl",
    "DependencyDecl",
    "Interpolation",
    "Item",
    "Manifest",
    "Num",
    "Param",
    "Position",
    "Ref",
    "ResourceDecl",
    "Str",
    "Value",
    "Var",
]


@dataclass(frozen=True, slots=True)
class Position:
    line: int
    column: int


# Values


@dataclass(frozen=True, slots=True)
class Interpolation:
    name: str


@dataclass(frozen=True, slots=True)
class Str:
    """
    A string literal; double-quoted strings may contain interpolation holes.
    """

    parts: tuple[str | Interpolation, ...]

    @classmethod
    def literal(cls, text: str) -> Str:
        return cls((text,))


@dataclass(frozen=True, slots=True)
class Num:
    value: int | float


@dataclass(frozen=True, slots=True)
class Array:
    items: tuple[Value, ...]


@dataclass(frozen=True, slots=True)
class Var:
    name: str


@dataclass(frozen=True, slots=True)
class Ref:
    """
    A resource reference, ``Type['title']``; the type name is kept lower-case.
    """

    rtype: str
    title: Value


type Value = Str | Num | Array | Var | Ref


# Items


@dataclass(frozen=True, slots=True)
class Attribute:
    name: str
    value: Value
    position: Position = field(compare=False)


@dataclass(frozen=True, slots=True)
class ResourceDecl:
    rtype: str
    title: Value
    attributes: tuple[Attribute, ...]
    position: Position = field(compare=False)


@dataclass(frozen=True, slots=True)
class Param:
    name: str
    default: Value | None = None


@dataclass(frozen=True, slots=True)
class DefineDecl:
    name: str
    params: tuple[Param, ...]
    body: Manifest
    position: Position = field(compare=False)


@dataclass(frozen=True, slots=True)
class DependencyDecl:
    source: Ref
    target: Ref
    position: Position = field(compare=False)


type Item = ResourceDecl | DefineDecl | DependencyDecl


@dataclass(frozen=True, slots=True)
class Manifest:
    items: tuple[Item, ...] = ()

    @property
    def defines(self) -> list[DefineDecl]:
        return [item for item in self.items if isinstance(item, DefineDecl)]

    @property
    def resources(self) -> list[ResourceDecl]:
        return [item for item in self.items if isinstance(item, ResourceDecl)]

    @property
    def dependencies(self) -> list[DependencyDecl]:
        return [item for item in self.items if isinstance(item, DependencyDecl)]
