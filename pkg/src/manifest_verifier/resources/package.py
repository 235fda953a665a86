"""
The package model.

Installing a package writes every file of its file list with a content-id unique
to the package and records the installation in a sentinel file under
:data:`SENTINEL_DIR`. Both installation and removal are guarded by the sentinel,
like a package manager that checks what is installed before acting.

Dependencies are installed first, each under its own sentinel guard. Removing a
package also removes the files of the installed packages depending on it, but
leaves their sentinels behind.
"""

from __future__ import annotations

from collections.abc import Iterable

import structlog

from manifest_verifier.frontend.graph import PrimitiveResource
from manifest_verifier.fsir.paths import Path
from manifest_verifier.fsir.syntax import (
    SKIP,
    DoesNotExist,
    FsExpr,
    If,
    IsEmptyDir,
    IsFile,
    Rm,
    seq,
)

from .base import (
    AttributeReader,
    CompileEnv,
    ensure_directories,
    install_file,
    package_content,
)

__all__ = ["SENTINEL_DIR", "compile_package", "sentinel"]

logger = structlog.stdlib.get_logger(__name__)

SENTINEL_DIR = Path.parse("/var/db/pkgs")

# never removed, even when only one package has files below them
KEPT_DIRECTORIES = frozenset(
    Path.parse(path)
    for path in ("/", "/etc", "/usr", "/var", "/var/db", "/var/db/pkgs", "/home")
)

INSTALL_VALUES = frozenset({"present", "installed", "latest"})
REMOVE_VALUES = frozenset({"absent", "purged"})

KNOWN_ATTRIBUTES = frozenset({"name", "ensure"})
IGNORED_ATTRIBUTES = frozenset(
    {
        "adminfile",
        "allow_virtual",
        "configfiles",
        "install_options",
        "provider",
        "responsefile",
        "uninstall_options",
    }
)


def sentinel(package: str) -> Path:
    return SENTINEL_DIR.child(package)


def _install(package: str, env: CompileEnv) -> FsExpr:
    files = env.db.files(package)
    marker = sentinel(package)
    return seq(
        *ensure_directories([*(path.parent for path in files), SENTINEL_DIR]),
        *(install_file(path, package_content(package, path)) for path in files),
        install_file(marker, package_content(package, marker)),
    )


def compile_present(package: str, env: CompileEnv) -> FsExpr:
    dependencies = [
        If(DoesNotExist(sentinel(dependency)), _install(dependency, env), SKIP)
        for dependency in env.db.dependency_closure(package)
    ]
    return If(
        DoesNotExist(sentinel(package)),
        seq(*dependencies, _install(package, env)),
        SKIP,
    )


def _directories(paths: Iterable[Path]) -> set[Path]:
    return {ancestor for path in paths for ancestor in path.ancestors()}


def _remove_files(paths: Iterable[Path]) -> FsExpr:
    return seq(*(If(IsFile(path), Rm(path), SKIP) for path in paths))


def compile_absent(package: str, env: CompileEnv) -> FsExpr:
    dependents = env.db.dependents(package)
    removed = {package, *dependents}

    own_files = env.db.files(package)
    dependent_files = [
        path for dependent in dependents for path in env.db.files(dependent)
    ]

    shared = _directories(
        path
        for other in env.db.packages
        if other not in removed
        for path in env.db.files(other)
    )
    unique = (
        _directories([*dependent_files, *own_files]) - shared - KEPT_DIRECTORIES
    )
    # children before their parents
    directories = sorted(unique, key=lambda path: (-len(path.segments), path))

    return If(
        DoesNotExist(sentinel(package)),
        SKIP,
        seq(
            *(
                If(
                    DoesNotExist(sentinel(dependent)),
                    SKIP,
                    _remove_files(env.db.files(dependent)),
                )
                for dependent in dependents
            ),
            _remove_files(own_files),
            Rm(sentinel(package)),
            *(If(IsEmptyDir(path), Rm(path), SKIP) for path in directories),
        ),
    )


def compile_package(resource: PrimitiveResource, env: CompileEnv) -> FsExpr:
    """
    Compile a ``package`` resource against the package database of ``env``.

    :raises UnknownPackage: if the package is not in the database.
    """
    reader = AttributeReader(resource, KNOWN_ATTRIBUTES, IGNORED_ATTRIBUTES)
    name = reader.segment("name", resource.title)
    ensure = reader.choice("ensure", INSTALL_VALUES | REMOVE_VALUES, "present")

    entry = env.db.get(name)
    logger.debug(
        "package_compiled",
        package=name,
        ensure=ensure,
        files=len(entry.files),
        platform=env.platform,
    )
    if ensure in INSTALL_VALUES:
        return compile_present(name, env)
    return compile_absent(name, env)
