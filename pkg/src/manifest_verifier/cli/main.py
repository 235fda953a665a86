"""
The ``manifest-verifier`` command line.

Verdicts and reports go to standard output, logs and errors to standard error.
The exit code is the only stable contract for scripts, see :class:`ExitCode`.
"""

from __future__ import annotations

import functools
import json
import time
from collections.abc import Callable, Mapping
from pathlib import Path as FilePath
from typing import NoReturn

import click
import structlog

from manifest_verifier import __version__
from manifest_verifier.analyses.elimination import Elimination
from manifest_verifier.analyses.summary import summarize_analyses
from manifest_verifier.checker.determinism import (
    check_compiled_determinism,
    reduce_graph,
)
from manifest_verifier.checker.exceptions import (
    BudgetExceeded,
    DeterminismRequired,
    ReplayFailure,
)
from manifest_verifier.checker.properties import (
    check_compiled_idempotence,
    check_compiled_invariant_file,
)
from manifest_verifier.checker.report import format_text, to_report
from manifest_verifier.checker.verdicts import (
    AnalysisError,
    Deterministic,
    Idempotent,
    InvariantHolds,
    Verdict,
)
from manifest_verifier.conf import settings
from manifest_verifier.conf.utils import render_config_docs
from manifest_verifier.exceptions import VerifierError
from manifest_verifier.frontend.expansion import expand
from manifest_verifier.frontend.graph import ResourceGraph
from manifest_verifier.frontend.parser import parse_manifest_file
from manifest_verifier.fsir.exceptions import InvalidPath
from manifest_verifier.fsir.paths import Path
from manifest_verifier.fsir.syntax import FsExpr
from manifest_verifier.resources.base import literal_content
from manifest_verifier.resources.compiler import compile_graph
from manifest_verifier.resources.exceptions import UnknownPlatform
from manifest_verifier.resources.package_db import (
    PackageDb,
    ingest_package_listing,
    load_package_db,
    save_package_db,
)
from manifest_verifier.setup import setup_env
from manifest_verifier.symbolic.exceptions import SymbolicError
from manifest_verifier.symbolic.solver import Solver

from .bench import BenchMode, run_benchmark
from .config import ExitCode, RunConfig

logger = structlog.stdlib.get_logger(__name__)

type Run = Callable[[ResourceGraph, Mapping[str, FsExpr], Solver], Verdict]

PASSING = (Deterministic, Idempotent, InvariantHolds)

CONFIG_GROUPS = ["Package database", "Solver", "Analysis", "Logging"]

# the options of verification_options that make up the RunConfig
RUN_OPTIONS = (
    "platform",
    "package_db",
    "solver_path",
    "timeout",
    "semantic_commute",
    "output_format",
    "emit_smt",
    "graph_dot",
    "debug_analyses",
)


def _fail(message: str, code: ExitCode = ExitCode.ERROR) -> NoReturn:
    click.echo(f"Error: {message}", err=True)
    raise SystemExit(code)


def _load_graph(path: FilePath) -> ResourceGraph:
    try:
        return expand(parse_manifest_file(path))
    except UnicodeDecodeError as err:
        raise click.BadParameter(f"{path} is not UTF-8 text.") from err


def _echo_report(
    verdict: Verdict, config: RunConfig, manifest: FilePath, check: str, start: float
) -> None:
    report = to_report(
        verdict,
        manifest=str(manifest),
        check=check,
        duration=time.monotonic() - start,
    )
    if config.output_format == "json":
        click.echo(report.model_dump_json(indent=2))
    else:
        click.echo(format_text(report))


def _debug_analyses(
    graph: ResourceGraph, compiled: Mapping[str, FsExpr], config: RunConfig
) -> None:
    reduction = reduce_graph(graph, compiled, config.options)
    elimination = Elimination(graph=reduction.graph, eliminated=reduction.eliminated)
    for line in summarize_analyses(compiled, elimination, reduction.pruning):
        click.echo(line, err=True)


def _verify(manifest: FilePath, config: RunConfig, check: str, run: Run) -> ExitCode:
    start = time.monotonic()
    structlog.contextvars.bind_contextvars(manifest=str(manifest), check=check)
    try:
        graph = _load_graph(manifest)
        if config.graph_dot is not None:
            config.graph_dot.write_text(graph.to_dot(), encoding="utf-8")
        compiled = compile_graph(graph, config.compile_env(graph))
        if config.debug_analyses:
            _debug_analyses(graph, compiled, config)
        verdict = run(graph, compiled, Solver(config.solver))
    except DeterminismRequired as err:
        if err.verdict is not None:
            _echo_report(err.verdict, config, manifest, "determinism", start)
        _fail(err.message, ExitCode.BLOCKED)
    except (SymbolicError, BudgetExceeded, ReplayFailure) as err:
        logger.warning("analysis_failed", error=type(err).__name__, detail=err.message)
        verdict = AnalysisError(error=type(err).__name__, detail=err.message)
        _echo_report(verdict, config, manifest, check, start)
        return ExitCode.ANALYSIS_ERROR
    except VerifierError as err:
        _fail(err.message)

    _echo_report(verdict, config, manifest, check, start)
    return ExitCode.OK if isinstance(verdict, PASSING) else ExitCode.VIOLATION


def verification_options(func):
    """
    The options shared by the commands that verify a manifest.
    """

    @click.argument(
        "manifest",
        type=click.Path(exists=True, dir_okay=False, path_type=FilePath),
    )
    @click.option("--platform", help="Platform of the package database.")
    @click.option(
        "--package-db",
        type=click.Path(file_okay=False, path_type=FilePath),
        help="Directory holding the <platform>.json package databases.",
    )
    @click.option("--solver-path", help="SMT-LIB solver executable.")
    @click.option("--timeout", type=click.FloatRange(min=0), help="Seconds per query.")
    @click.option("--no-por", is_flag=True, help="Explore every ordering.")
    @click.option("--no-prune", is_flag=True, help="Do not prune resource files.")
    @click.option("--no-elim", is_flag=True, help="Do not eliminate resources.")
    @click.option(
        "--semantic-commute",
        is_flag=True,
        help="Ask the solver when resources do not obviously commute.",
    )
    @click.option(
        "--format",
        "output_format",
        type=click.Choice(["text", "json"]),
        default="text",
        show_default=True,
    )
    @click.option(
        "--emit-smt",
        type=click.Path(file_okay=False, path_type=FilePath),
        help="Write every solver query to this directory.",
    )
    @click.option(
        "--graph-dot",
        type=click.Path(dir_okay=False, writable=True, path_type=FilePath),
        help="Write the resource graph in DOT format to this file.",
    )
    @click.option(
        "--debug-analyses",
        is_flag=True,
        help="Print the abstract states, eliminated resources and pruned paths.",
    )
    @functools.wraps(func)
    def wrapper(
        manifest: FilePath,
        no_por: bool,
        no_prune: bool,
        no_elim: bool,
        **options,
    ):
        config = RunConfig.from_options(
            por=not no_por,
            prune=not no_prune,
            elim=not no_elim,
            stem=manifest.stem,
            **{name: options.pop(name) for name in RUN_OPTIONS},
        )
        return func(manifest, config, **options)

    return wrapper


@click.group()
@click.version_option(__version__)
def main():
    """
    Check that configuration manifests are deterministic and idempotent.
    """
    setup_env()


@main.command()
@verification_options
def check(manifest: FilePath, config: RunConfig):
    """
    Check that every ordering of the resources of MANIFEST has the same effect.
    """

    def run(graph, compiled, solver):
        return check_compiled_determinism(
            graph, compiled, solver=solver, options=config.options
        )

    raise SystemExit(_verify(manifest, config, "determinism", run))


@main.command()
@verification_options
def idempotence(manifest: FilePath, config: RunConfig):
    """
    Check that applying MANIFEST twice has the same effect as applying it once.

    The manifest has to be deterministic.
    """

    def run(graph, compiled, solver):
        return check_compiled_idempotence(
            graph, compiled, solver=solver, options=config.options
        )

    raise SystemExit(_verify(manifest, config, "idempotence", run))


@main.command()
@click.option("--path", "target", required=True, help="Absolute path of the file.")
@click.option("--content", required=True, help="Content the file must have.")
@verification_options
def invariant(manifest: FilePath, config: RunConfig, target: str, content: str):
    """
    Check that every successful run of MANIFEST leaves a file with CONTENT at PATH.

    The manifest has to be deterministic.
    """
    try:
        path = Path.parse(target)
    except InvalidPath as err:
        raise click.BadParameter(err.message, param_hint="--path") from err

    def run(graph, compiled, solver):
        return check_compiled_invariant_file(
            graph,
            compiled,
            path,
            literal_content(content),
            solver=solver,
            options=config.options,
        )

    raise SystemExit(_verify(manifest, config, "invariant", run))


@main.command()
@click.argument(
    "manifest", type=click.Path(exists=True, dir_okay=False, path_type=FilePath)
)
@click.option(
    "-o",
    "--output",
    type=click.File("w", encoding="utf-8"),
    default="-",
    help="Output file, standard output by default.",
)
def graph(manifest: FilePath, output):
    """
    Print the resource graph of MANIFEST in DOT format.
    """
    try:
        resources = _load_graph(manifest)
    except VerifierError as err:
        _fail(err.message)
    output.write(resources.to_dot())


@main.command("import-packages")
@click.argument("name")
@click.argument("listing", type=click.File("r", encoding="utf-8"))
@click.option("--platform", help="Platform of the package database.")
@click.option(
    "--package-db",
    type=click.Path(file_okay=False, path_type=FilePath),
    help="Directory holding the <platform>.json package databases.",
)
@click.option(
    "--depends",
    multiple=True,
    help="A package NAME depends on; repeat for more.",
)
def import_packages(
    name: str,
    listing,
    platform: str | None,
    package_db: FilePath | None,
    depends: tuple[str, ...],
):
    """
    Record the files of package NAME from LISTING, one path per line.

    LISTING is the output of ``dpkg -L`` or ``repoquery -l``; use - for standard
    input.
    """
    platform = platform or settings.PLATFORM
    directory = package_db or settings.PACKAGE_DB
    try:
        try:
            db = load_package_db(directory, platform)
        except UnknownPlatform:
            db = PackageDb(platform=platform)
        updated = ingest_package_listing(db, name, listing.read(), depends)
        path = save_package_db(updated, directory)
    except VerifierError as err:
        _fail(err.message)
    click.echo(f"{name}: {len(updated.get(name).files)} files recorded in {path}")


class CountRange(click.ParamType):
    """
    A count ``n`` or an inclusive range ``low..high``.
    """

    name = "count"

    def convert(self, value, param, ctx) -> list[int]:
        if isinstance(value, list):
            return value
        low, _, high = str(value).partition("..")
        try:
            counts = list(range(int(low), int(high or low) + 1))
        except ValueError:
            self.fail(f"{value!r} is neither a count nor a range like 2..5", param, ctx)
        if not counts or counts[0] < 1:
            self.fail(f"{value!r} must contain positive counts only", param, ctx)
        return counts


@main.command("bench-synthetic")
@click.option(
    "--n",
    "counts",
    type=CountRange(),
    multiple=True,
    default=["2..5"],
    show_default=True,
    help="Number of conflicting packages, or a range like 2..5; repeatable.",
)
@click.option(
    "--mode",
    type=click.Choice([mode.value for mode in BenchMode]),
    default=BenchMode.conflict.value,
    show_default=True,
)
@click.option(
    "--runs",
    type=click.IntRange(min=1),
    default=3,
    show_default=True,
    help="Runs per size; the median time is reported.",
)
@click.option("--solver-path", help="SMT-LIB solver executable.")
@click.option(
    "--format",
    "output_format",
    type=click.Choice(["text", "json"]),
    default="text",
    show_default=True,
)
def bench_synthetic(
    counts: tuple[list[int], ...],
    mode: str,
    runs: int,
    solver_path: str | None,
    output_format: str,
):
    """
    Time the determinism check on n packages writing the same file.
    """
    config = RunConfig.from_options(solver_path=solver_path)
    sizes = sorted({n for group in counts for n in group})
    results = []
    for n in sizes:
        try:
            result = run_benchmark(
                n,
                BenchMode(mode),
                runs=runs,
                solver_config=config.solver,
                options=config.options,
            )
        except (SymbolicError, BudgetExceeded) as err:
            _fail(err.message, ExitCode.ANALYSIS_ERROR)
        results.append(result)
        if output_format == "text":
            click.echo(
                f"n={result.n} mode={result.mode} verdict={result.verdict} "
                f"median={result.seconds:.3f}s runs={result.runs}"
            )
    if output_format == "json":
        document = [
            {
                "n": result.n,
                "mode": str(result.mode),
                "verdict": result.verdict,
                "seconds": round(result.seconds, 3),
                "runs": result.runs,
            }
            for result in results
        ]
        click.echo(json.dumps(document, indent=2))


@main.command("config-docs")
def config_docs():
    """
    Print the reference of the environment variables in reStructuredText.
    """
    # reading one option registers all of them
    assert settings.PLATFORM
    click.echo(render_config_docs(CONFIG_GROUPS))
