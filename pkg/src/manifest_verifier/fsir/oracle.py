"""
Brute-force oracles over small, explicitly enumerated filesystems.

These back the property tests of the symbolic engine and the analyses: whatever
the solver concludes must agree with exhaustive evaluation on a bounded domain.
"""

from __future__ import annotations

from collections.abc import Collection, Iterator

from .evaluation import evaluate
from .exceptions import NotParentClosed
from .filesystem import DIR, File, FileContent, FileSystem
from .paths import Path, is_parent_closed
from .syntax import FsExpr

__all__ = ["enumerate_filesystems", "oracle_equiv", "oracle_witness"]


def enumerate_filesystems(
    paths: Collection[Path], contents: Collection[str]
) -> Iterator[FileSystem]:
    """
    Yield every tree-closed filesystem over (a subset of) ``paths``.

    :raises NotParentClosed: if some path's parent is not in ``paths``.
    """
    if not is_parent_closed(paths):
        raise NotParentClosed("Enumeration requires a parent-closed path set.")

    ordered = sorted(paths)
    choices: list[FileContent] = [DIR, *(File(content) for content in sorted(contents))]
    entries: dict[Path, FileContent] = {}

    def assign(index: int) -> Iterator[FileSystem]:
        if index == len(ordered):
            yield FileSystem(entries, check=False)
            return
        path = ordered[index]
        yield from assign(index + 1)
        if not path.is_root and entries.get(path.parent) != DIR:
            return
        for choice in choices:
            entries[path] = choice
            yield from assign(index + 1)
        del entries[path]

    yield from assign(0)


def oracle_witness(
    e1: FsExpr, e2: FsExpr, paths: Collection[Path], contents: Collection[str]
) -> FileSystem | None:
    """
    Return the first enumerated filesystem on which the expressions disagree.
    """
    for fs in enumerate_filesystems(paths, contents):
        if evaluate(e1, fs) != evaluate(e2, fs):
            return fs
    return None


def oracle_equiv(
    e1: FsExpr, e2: FsExpr, paths: Collection[Path], contents: Collection[str]
) -> bool:
    return oracle_witness(e1, e2, paths, contents) is None
