"""
Line-oriented dumps of the analysis results, for ``--debug-analyses``.

One fact per line, sorted, so the output of two runs can be diffed.
"""

from __future__ import annotations

from collections.abc import Mapping

from manifest_verifier.fsir.filesystem import Dir, File
from manifest_verifier.fsir.syntax import FsExpr
from manifest_verifier.utils.sexpr import quote

from .commutativity import comm_abstract
from .definitive import DefWrite, defwrite_abstract
from .elimination import Elimination
from .pruning import PruneResult

__all__ = ["format_defwrite", "summarize_analyses"]


def format_defwrite(value: DefWrite) -> str:
    match value:
        case Dir():
            return "dir"
        case File(content):
            return f"file {quote(content)}"
        case _:
            return repr(value)


def summarize_resource(vertex: str, expr: FsExpr) -> list[str]:
    comm = comm_abstract(expr)
    lines = [f"resource {vertex}"]
    lines.extend(
        f"  access {path} {comm.access[path]}" for path in sorted(comm.access)
    )
    lines.extend(f"  listed {path}" for path in sorted(comm.listed))
    definitive = defwrite_abstract(expr)
    lines.extend(
        f"  definitive {path} {format_defwrite(definitive.values[path])}"
        for path in sorted(definitive.definitive_paths)
    )
    return lines


def summarize_analyses(
    compiled: Mapping[str, FsExpr],
    elimination: Elimination | None = None,
    pruning: PruneResult | None = None,
) -> list[str]:
    lines: list[str] = []
    for vertex in sorted(compiled):
        lines.extend(summarize_resource(vertex, compiled[vertex]))
    if elimination is not None:
        lines.extend(f"eliminated {vertex}" for vertex in elimination.eliminated)
    if pruning is not None:
        for vertex in sorted(pruning.pruned):
            lines.extend(
                f"pruned {vertex} {path}" for path in pruning.pruned[vertex]
            )
    return lines
