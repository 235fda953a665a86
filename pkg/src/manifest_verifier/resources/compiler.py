from __future__ import annotations

from typing import assert_never

import structlog

from manifest_verifier.frontend.constants import ResourceType
from manifest_verifier.frontend.graph import PrimitiveResource, ResourceGraph
from manifest_verifier.fsir.syntax import FsExpr

from .accounts import compile_group, compile_ssh_key, compile_user
from .base import CompileEnv
from .file import compile_file
from .package import compile_package

__all__ = ["compile_graph", "compile_resource"]

logger = structlog.stdlib.get_logger(__name__)


def compile_resource(resource: PrimitiveResource, env: CompileEnv) -> FsExpr:
    """
    Compile a primitive resource to a filesystem expression.

    :raises InvalidAttributes: on unsupported or contradictory attributes.
    :raises UnknownPackage: for a package missing from the package database.
    """
    match resource.rtype:
        case ResourceType.file:
            return compile_file(resource)
        case ResourceType.package:
            return compile_package(resource, env)
        case ResourceType.user:
            return compile_user(resource)
        case ResourceType.group:
            return compile_group(resource)
        case ResourceType.ssh_authorized_key:
            return compile_ssh_key(resource)
        case _:  # pragma: no cover
            assert_never(resource.rtype)


def compile_graph(graph: ResourceGraph, env: CompileEnv) -> dict[str, FsExpr]:
    compiled = {
        vertex: compile_resource(resource, env)
        for vertex, resource in graph.labels.items()
    }
    logger.info("graph_compiled", resources=len(compiled), platform=env.platform)
    return compiled
