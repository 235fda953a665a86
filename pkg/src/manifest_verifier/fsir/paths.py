from __future__ import annotations

from collections.abc import Iterable, Iterator
from dataclasses import dataclass

from .exceptions import InvalidPath

__all__ = ["ROOT", "Path", "is_parent_closed", "parent_closure"]


@dataclass(frozen=True, slots=True, order=True)
class Path:
    """
    A canonical absolute path.

    Paths order by their segments, which puts every parent before its children.
    """

    segments: tuple[str, ...] = ()

    def __post_init__(self):
        for segment in self.segments:
            if not segment or segment in (".", "..") or "/" in segment:
                raise InvalidPath(f"Invalid path segment {segment!r}.")

    @classmethod
    def parse(cls, text: str) -> Path:
        if not text.startswith("/"):
            raise InvalidPath(f"Path {text!r} is not absolute.")
        if text == "/":
            return ROOT
        if text.endswith("/"):
            raise InvalidPath(f"Path {text!r} has a trailing separator.")
        try:
            return cls(tuple(text[1:].split("/")))
        except InvalidPath as exc:
            raise InvalidPath(f"Path {text!r} is not canonical.") from exc

    def __str__(self) -> str:
        return "/" + "/".join(self.segments)

    def __repr__(self) -> str:
        return f"Path({str(self)!r})"

    @property
    def is_root(self) -> bool:
        return not self.segments

    @property
    def name(self) -> str:
        return self.segments[-1] if self.segments else ""

    @property
    def parent(self) -> Path:
        if not self.segments:
            raise ValueError("The root path has no parent.")
        return Path(self.segments[:-1])

    def child(self, name: str) -> Path:
        return Path((*self.segments, name))

    def ancestors(self) -> Iterator[Path]:
        """
        Yield the proper ancestors, root first.
        """
        for depth in range(len(self.segments)):
            yield Path(self.segments[:depth])

    def is_ancestor_of(self, other: Path) -> bool:
        return (
            len(self.segments) < len(other.segments)
            and other.segments[: len(self.segments)] == self.segments
        )

    def is_child_of(self, other: Path) -> bool:
        return (
            len(self.segments) == len(other.segments) + 1
            and self.segments[:-1] == other.segments
        )


ROOT = Path()


def parent_closure(paths: Iterable[Path]) -> frozenset[Path]:
    closed: set[Path] = set()
    for path in paths:
        closed.add(path)
        closed.update(path.ancestors())
    return frozenset(closed)


def is_parent_closed(paths: Iterable[Path]) -> bool:
    paths = set(paths)
    return all(path.is_root or path.parent in paths for path in paths)
