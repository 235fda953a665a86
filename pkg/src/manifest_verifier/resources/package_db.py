"""
The package database: for every package of a platform, the files it installs and
the packages it depends on.

One JSON document per platform lives in the package database directory as
``<platform>.json``. Documents are written with sorted keys and sorted file lists,
so loading and dumping a document reproduces it byte for byte.
"""

from __future__ import annotations

import json
import os
import tempfile
from collections.abc import Sequence
from pathlib import Path as FilePath
from typing import Annotated

import structlog
from pydantic import (
    AfterValidator,
    BaseModel,
    ConfigDict,
    ValidationError,
    field_validator,
    model_validator,
)

from manifest_verifier.fsir.exceptions import InvalidPath
from manifest_verifier.fsir.paths import Path

from .exceptions import (
    PackageDbError,
    PackageListingError,
    UnknownPackage,
    UnknownPlatform,
)

__all__ = [
    "PackageDb",
    "PackageEntry",
    "ingest_package_listing",
    "load_package_db",
    "parse_listing",
    "save_package_db",
]

logger = structlog.stdlib.get_logger(__name__)

# dpkg -L notes on diverted files
_SKIPPED_PREFIXES = ("diverted", "package diverts")


def _canonical_path(value: str) -> str:
    try:
        path = Path.parse(value)
    except InvalidPath as err:
        raise ValueError(err.message) from err
    if path.is_root:
        raise ValueError("A package cannot install the root directory.")
    return value


type PackagePath = Annotated[str, AfterValidator(_canonical_path)]


class PackageEntry(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    files: tuple[PackagePath, ...] = ()
    deps: tuple[str, ...] = ()

    @field_validator("files")
    @classmethod
    def sort_files(cls, value: tuple[str, ...]) -> tuple[str, ...]:
        paths = {Path.parse(file) for file in value}
        directories = {ancestor for path in paths for ancestor in path.ancestors()}
        if clash := sorted(paths & directories):
            raise ValueError(f"'{clash[0]}' is listed both as a file and a directory.")
        return tuple(str(path) for path in sorted(paths))

    @field_validator("deps")
    @classmethod
    def sort_deps(cls, value: tuple[str, ...]) -> tuple[str, ...]:
        return tuple(sorted(set(value)))

    @property
    def paths(self) -> tuple[Path, ...]:
        return tuple(Path.parse(file) for file in self.files)


class PackageDb(BaseModel):
    """
    The file lists of one platform. Read-only during verification.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    platform: str
    packages: dict[str, PackageEntry] = {}

    @model_validator(mode="after")
    def check_dependencies(self) -> PackageDb:
        for name, entry in self.packages.items():
            for dependency in entry.deps:
                if dependency not in self.packages:
                    raise ValueError(
                        f"Package '{name}' depends on unknown package '{dependency}'."
                    )
        return self

    def get(self, name: str) -> PackageEntry:
        try:
            return self.packages[name]
        except KeyError:
            raise UnknownPackage(name, self.platform) from None

    def files(self, name: str) -> tuple[Path, ...]:
        return self.get(name).paths

    def dependency_closure(self, name: str) -> list[str]:
        """
        Return every package ``name`` depends on, transitively, dependencies first.

        The package itself is not part of the result, even when the dependencies
        are cyclic.
        """
        self.get(name)
        order: list[str] = []
        visited = {name}

        def visit(package: str) -> None:
            for dependency in self.get(package).deps:
                if dependency in visited:
                    continue
                visited.add(dependency)
                visit(dependency)
                order.append(dependency)

        visit(name)
        return order

    def dependents(self, name: str) -> list[str]:
        """
        Return the packages that depend on ``name``, transitively, sorted.
        """
        self.get(name)
        return sorted(
            package
            for package in self.packages
            if package != name and name in self.dependency_closure(package)
        )

    def with_package(
        self, name: str, files: Sequence[str], deps: Sequence[str] = ()
    ) -> PackageDb:
        packages = {**self.packages, name: PackageEntry(files=files, deps=deps)}
        return PackageDb(platform=self.platform, packages=packages)

    def dumps(self) -> str:
        return json.dumps(self.model_dump(mode="json"), sort_keys=True, indent=2) + "\n"


def _document_path(directory: FilePath, platform: str) -> FilePath:
    return directory / f"{platform}.json"


def load_package_db(directory: FilePath, platform: str) -> PackageDb:
    """
    Load the package database of ``platform`` from ``directory``.

    :raises UnknownPlatform: if there is no document for the platform.
    :raises PackageDbError: if the document is not a valid package database.
    """
    path = _document_path(directory, platform)
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError as err:
        raise UnknownPlatform(
            f"No package database for platform '{platform}' in {directory}."
        ) from err

    try:
        db = PackageDb.model_validate_json(text)
    except ValidationError as err:
        raise PackageDbError(f"Invalid package database {path}: {err}") from err

    if db.platform != platform:
        raise PackageDbError(
            f"Package database {path} describes platform '{db.platform}', "
            f"expected '{platform}'."
        )
    logger.debug(
        "package_db_loaded", platform=platform, packages=len(db.packages), path=path
    )
    return db


def save_package_db(db: PackageDb, directory: FilePath) -> FilePath:
    """
    Write ``db`` to its platform document, replacing it atomically.
    """
    path = _document_path(directory, db.platform)
    directory.mkdir(parents=True, exist_ok=True)
    with tempfile.NamedTemporaryFile(
        "w",
        encoding="utf-8",
        dir=directory,
        prefix=f".{db.platform}-",
        suffix=".json",
        delete=False,
    ) as outfile:
        outfile.write(db.dumps())
    os.replace(outfile.name, path)
    logger.info("package_db_saved", platform=db.platform, path=path)
    return path


def parse_listing(text: str) -> list[str]:
    """
    Parse a package file listing, one absolute path per line.

    This is the output of ``dpkg -L``, ``apt-file list`` or ``repoquery -l``. Blank
    lines, the ``/.`` entry and dpkg's diversion notes are skipped. Directories,
    recognised as paths that contain another listed path, are dropped: they are
    created as ancestors of the files when the package is compiled.
    A directory the listing leaves empty cannot be told apart from a file and is
    kept as a file.

    :raises PackageListingError: on relative or non-canonical paths.
    """
    paths: set[Path] = set()
    for number, line in enumerate(text.splitlines(), start=1):
        entry = line.strip()
        if not entry or entry == "/." or entry.startswith(_SKIPPED_PREFIXES):
            continue
        try:
            path = Path.parse(entry)
        except InvalidPath as err:
            raise PackageListingError(err.message, line=number) from err
        if path.is_root:
            continue
        paths.add(path)

    directories = {ancestor for path in paths for ancestor in path.ancestors()}
    return [str(path) for path in sorted(paths - directories)]


def ingest_package_listing(
    db: PackageDb, name: str, listing: str, deps: Sequence[str] = ()
) -> PackageDb:
    """
    Return ``db`` with package ``name`` set to the files of ``listing``.

    :raises UnknownPackage: if a dependency is not in the database.
    """
    files = parse_listing(listing)
    for dependency in deps:
        if dependency != name:
            db.get(dependency)
    updated = db.with_package(name, files, [dep for dep in deps if dep != name])
    logger.info(
        "package_listing_ingested",
        platform=db.platform,
        package=name,
        files=len(files),
        deps=list(deps),
    )
    return updated
