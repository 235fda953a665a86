from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
from pathlib import Path as FilePath
from typing import Literal

from manifest_verifier.checker.determinism import CheckOptions
from manifest_verifier.conf import settings
from manifest_verifier.frontend.constants import ResourceType
from manifest_verifier.frontend.graph import ResourceGraph
from manifest_verifier.resources.base import CompileEnv
from manifest_verifier.resources.exceptions import UnknownPlatform
from manifest_verifier.resources.package_db import PackageDb, load_package_db
from manifest_verifier.symbolic.solver import SolverConfig

__all__ = ["ExitCode", "OutputFormat", "RunConfig"]


class ExitCode(IntEnum):
    OK = 0
    VIOLATION = 1
    #: usage, parse and model errors
    ERROR = 2
    #: the solver gave no answer or a budget ran out
    ANALYSIS_ERROR = 3
    #: the check needs a deterministic manifest
    BLOCKED = 4


type OutputFormat = Literal["text", "json"]


@dataclass(frozen=True)
class RunConfig:
    """
    The settings of one command, command line flags over the environment.
    """

    platform: str
    package_db: FilePath
    solver: SolverConfig
    options: CheckOptions
    output_format: OutputFormat = "text"
    graph_dot: FilePath | None = None
    debug_analyses: bool = False

    @classmethod
    def from_options(
        cls,
        *,
        platform: str | None = None,
        package_db: FilePath | None = None,
        solver_path: str | None = None,
        timeout: float | None = None,
        emit_smt: FilePath | None = None,
        stem: str = "query",
        por: bool = True,
        prune: bool = True,
        elim: bool = True,
        semantic_commute: bool = False,
        output_format: OutputFormat = "text",
        graph_dot: FilePath | None = None,
        debug_analyses: bool = False,
    ) -> RunConfig:
        overrides = {"emit_dir": emit_smt, "stem": stem}
        if solver_path is not None:
            overrides["path"] = solver_path
        if timeout is not None:
            overrides["timeout"] = timeout
        return cls(
            platform=platform or settings.PLATFORM,
            package_db=package_db or settings.PACKAGE_DB,
            solver=SolverConfig.from_settings(**overrides),
            options=CheckOptions(
                por=por, prune=prune, elim=elim, semantic_commute=semantic_commute
            ),
            output_format=output_format,
            graph_dot=graph_dot,
            debug_analyses=debug_analyses,
        )

    def compile_env(self, graph: ResourceGraph) -> CompileEnv:
        """
        :raises UnknownPlatform: if the graph has packages and the platform is not
            in the package database.
        """
        try:
            db = load_package_db(self.package_db, self.platform)
        except UnknownPlatform:
            if any(
                resource.rtype == ResourceType.package
                for resource in graph.labels.values()
            ):
                raise
            db = PackageDb(platform=self.platform)
        return CompileEnv(db=db)
