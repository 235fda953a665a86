"""
Verdict reports, as versioned JSON documents or as text for a terminal.

The JSON layout is the stable contract; the text rendering may change.
"""

from __future__ import annotations

from collections.abc import Mapping
from typing import Literal, assert_never

from pydantic import BaseModel

from manifest_verifier.fsir.filesystem import Dir, EvalResult, File, FileSystem, Ok

from .verdicts import (
    AnalysisError,
    Deterministic,
    Idempotent,
    InvariantHolds,
    InvariantViolated,
    NonDeterministic,
    NonIdempotent,
    Statistics,
    Verdict,
)

__all__ = [
    "Counterexample",
    "PathState",
    "Report",
    "RunResult",
    "format_text",
    "to_report",
]

SCHEMA_VERSION = 1


class PathState(BaseModel):
    kind: Literal["dir", "file"]
    content: str | None = None


type FilesystemDump = dict[str, PathState]


class RunResult(BaseModel):
    ok: bool
    #: the final filesystem of a successful run
    filesystem: FilesystemDump | None = None


class Counterexample(BaseModel):
    input: FilesystemDump
    #: the resource orderings that were run, as lists of resource titles
    orderings: list[list[str]] = []
    results: list[RunResult]


class Report(BaseModel):
    schema_version: Literal[1] = SCHEMA_VERSION
    manifest: str
    check: str
    verdict: str
    error: str | None = None
    detail: str | None = None
    counterexample: Counterexample | None = None
    statistics: Statistics
    #: seconds
    duration: float


def dump_filesystem(fs: FileSystem) -> FilesystemDump:
    dump: FilesystemDump = {}
    for path in sorted(fs):
        match fs[path]:
            case Dir():
                dump[str(path)] = PathState(kind="dir")
            case File(content=content):
                dump[str(path)] = PathState(kind="file", content=content)
            case unreachable:  # pragma: no cover
                assert_never(unreachable)
    return dump


def dump_result(result: EvalResult) -> RunResult:
    if isinstance(result, Ok):
        return RunResult(ok=True, filesystem=dump_filesystem(result.fs))
    return RunResult(ok=False)


def _counterexample(verdict: Verdict) -> Counterexample | None:
    match verdict:
        case NonDeterministic():
            return Counterexample(
                input=dump_filesystem(verdict.input),
                orderings=[list(verdict.ordering_a), list(verdict.ordering_b)],
                results=[dump_result(verdict.result_a), dump_result(verdict.result_b)],
            )
        case NonIdempotent():
            return Counterexample(
                input=dump_filesystem(verdict.input),
                results=[
                    dump_result(verdict.first_run),
                    dump_result(verdict.second_run),
                ],
            )
        case InvariantViolated():
            return Counterexample(
                input=dump_filesystem(verdict.input),
                results=[dump_result(verdict.result)],
            )
        case Deterministic() | Idempotent() | InvariantHolds() | AnalysisError():
            return None
        case unreachable:  # pragma: no cover
            assert_never(unreachable)


def to_report(
    verdict: Verdict, *, manifest: str, check: str, duration: float
) -> Report:
    error = detail = None
    if isinstance(verdict, AnalysisError):
        error, detail = verdict.error, verdict.detail
    return Report(
        manifest=manifest,
        check=check,
        verdict=verdict.kind,
        error=error,
        detail=detail,
        counterexample=_counterexample(verdict),
        statistics=verdict.stats,
        duration=round(duration, 3),
    )


def _format_state(state: PathState) -> str:
    if state.kind == "dir":
        return "directory"
    return f'file "{state.content}"'


def _format_filesystem(dump: Mapping[str, PathState], indent: str) -> list[str]:
    if not dump:
        return [f"{indent}(empty)"]
    return [f"{indent}{path}: {_format_state(state)}" for path, state in dump.items()]


def _format_result(label: str, result: RunResult) -> list[str]:
    if not result.ok:
        return [f"{label}: error"]
    assert result.filesystem is not None
    return [f"{label}: success", *_format_filesystem(result.filesystem, "    ")]


def format_text(report: Report) -> str:
    lines = [f"{report.manifest}: {report.verdict}"]
    if report.error:
        lines.append(f"  {report.error}: {report.detail}")

    if (example := report.counterexample) is not None:
        lines.append("  input filesystem:")
        lines += _format_filesystem(example.input, "    ")
        if example.orderings:
            labels = ["ordering A", "ordering B"]
            for label, order, result in zip(
                labels, example.orderings, example.results, strict=True
            ):
                lines.append(f"  {label}: {' -> '.join(order)}")
                lines += _format_result("  result", result)
        elif report.verdict == "non-idempotent":
            first, second = example.results
            lines += _format_result("  after one run", first)
            lines += _format_result("  after two runs", second)
        else:
            lines += _format_result("  result", example.results[0])

    stats = report.statistics
    lines.append(
        f"  {stats.vertices} resources, {stats.eliminated} eliminated, "
        f"{stats.pruned_paths} paths pruned, {stats.branches} branches, "
        f"{stats.queries} solver queries, {report.duration:.2f}s"
    )
    if stats.analyses_disabled:
        lines.append("  (verdict obtained with the analyses disabled)")
    return "\n".join(lines)
