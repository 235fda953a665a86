"""
The synthetic scaling benchmark.

``n`` unordered packages all install the same file. In ``conflict`` mode this is
non-deterministic and no analysis can reduce the orderings to explore. In
``deterministic`` mode a file resource ordered after every package overwrites the
file, so every ordering ends in the same state, which the solver has to prove.
"""

from __future__ import annotations

import statistics
import time
from dataclasses import dataclass
from enum import StrEnum

import structlog

from manifest_verifier.checker.determinism import (
    CheckOptions,
    check_compiled_determinism,
)
from manifest_verifier.frontend.expansion import expand
from manifest_verifier.frontend.parser import parse_manifest
from manifest_verifier.resources.base import CompileEnv
from manifest_verifier.resources.compiler import compile_graph
from manifest_verifier.resources.package_db import PackageDb, PackageEntry
from manifest_verifier.symbolic.solver import Solver, SolverConfig

__all__ = ["BenchMode", "BenchResult", "run_benchmark", "synthetic_manifest"]

logger = structlog.stdlib.get_logger(__name__)

SHARED_FILE = "/a"
PLATFORM = "synthetic"


class BenchMode(StrEnum):
    conflict = "conflict"
    deterministic = "deterministic"


@dataclass(frozen=True)
class BenchResult:
    n: int
    mode: BenchMode
    verdict: str
    #: the median over the runs, in seconds
    seconds: float
    runs: int


def _package(index: int) -> str:
    return f"A-{index}"


def synthetic_manifest(n: int, mode: BenchMode) -> str:
    lines = []
    for index in range(1, n + 1):
        if mode == BenchMode.deterministic:
            lines.append(
                f"package{{'{_package(index)}': before => File['{SHARED_FILE}'] }}"
            )
        else:
            lines.append(f"package{{'{_package(index)}': ensure => present }}")
    if mode == BenchMode.deterministic:
        lines.append(f"file{{'{SHARED_FILE}': content => 'final' }}")
    return "\n".join(lines) + "\n"


def synthetic_db(n: int) -> PackageDb:
    return PackageDb(
        platform=PLATFORM,
        packages={
            _package(index): PackageEntry(files=(SHARED_FILE,))
            for index in range(1, n + 1)
        },
    )


def run_benchmark(
    n: int,
    mode: BenchMode,
    *,
    runs: int = 3,
    solver_config: SolverConfig | None = None,
    options: CheckOptions | None = None,
) -> BenchResult:
    """
    Check the synthetic manifest of size ``n`` ``runs`` times.
    """
    if n < 1:
        raise ValueError("The benchmark needs at least one package.")
    graph = expand(parse_manifest(synthetic_manifest(n, mode)))
    compiled = compile_graph(graph, CompileEnv(db=synthetic_db(n)))

    timings, verdicts = [], set()
    for _ in range(runs):
        solver = Solver(solver_config)
        start = time.perf_counter()
        verdict = check_compiled_determinism(
            graph, compiled, solver=solver, options=options
        )
        timings.append(time.perf_counter() - start)
        verdicts.add(verdict.kind)

    # the verdict does not depend on the run
    assert len(verdicts) == 1, verdicts
    result = BenchResult(
        n=n,
        mode=mode,
        verdict=verdicts.pop(),
        seconds=statistics.median(timings),
        runs=runs,
    )
    logger.info("benchmark_finished", n=n, mode=str(mode), seconds=result.seconds)
    return result
