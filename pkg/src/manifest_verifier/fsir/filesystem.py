from __future__ import annotations

from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass

from .exceptions import TreeClosureViolation
from .paths import Path

__all__ = [
    "DIR",
    "Dir",
    "Err",
    "ERR",
    "EvalResult",
    "File",
    "FileContent",
    "FileSystem",
    "Ok",
]


@dataclass(frozen=True, slots=True)
class Dir:
    def __repr__(self) -> str:
        return "Dir"


@dataclass(frozen=True, slots=True)
class File:
    content: str


type FileContent = Dir | File

DIR = Dir()


class FileSystem(Mapping[Path, FileContent]):
    """
    An immutable, tree-closed map from paths to file contents.

    Every non-root path in the map has its parent in the map, bound to a
    directory. Updates return new values.
    """

    __slots__ = ("_entries", "_hash")

    def __init__(
        self,
        entries: Mapping[Path, FileContent] | Iterable[tuple[Path, FileContent]] = (),
        *,
        check: bool = True,
    ):
        self._entries: dict[Path, FileContent] = dict(entries)
        self._hash: int | None = None
        if check:
            self._check_tree_closure()

    @classmethod
    def from_strings(cls, entries: Mapping[str, FileContent]) -> FileSystem:
        return cls({Path.parse(path): value for path, value in entries.items()})

    def _check_tree_closure(self) -> None:
        for path in self._entries:
            if path.is_root:
                continue
            if self._entries.get(path.parent) != DIR:
                raise TreeClosureViolation(
                    f"Path {path} is present but its parent is not a directory."
                )

    def __getitem__(self, path: Path) -> FileContent:
        return self._entries[path]

    def __iter__(self) -> Iterator[Path]:
        return iter(sorted(self._entries))

    def __len__(self) -> int:
        return len(self._entries)

    def __contains__(self, path: object) -> bool:
        return path in self._entries

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FileSystem):
            return NotImplemented
        return self._entries == other._entries

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._entries.items()))
        return self._hash

    def __repr__(self) -> str:
        body = ", ".join(f"'{path}': {self._entries[path]!r}" for path in self)
        return f"FileSystem({{{body}}})"

    def set(self, path: Path, value: FileContent) -> FileSystem:
        entries = dict(self._entries)
        entries[path] = value
        return FileSystem(entries, check=False)

    def remove(self, path: Path) -> FileSystem:
        entries = dict(self._entries)
        del entries[path]
        return FileSystem(entries, check=False)

    def has_children(self, path: Path) -> bool:
        return any(candidate.is_child_of(path) for candidate in self._entries)

    def restrict(self, paths: Iterable[Path]) -> FileSystem:
        keep = set(paths)
        return FileSystem(
            {path: value for path, value in self._entries.items() if path in keep}
        )


@dataclass(frozen=True, slots=True)
class Ok:
    fs: FileSystem


@dataclass(frozen=True, slots=True)
class Err:
    def __repr__(self) -> str:
        return "Err"


type EvalResult = Ok | Err

ERR = Err()
