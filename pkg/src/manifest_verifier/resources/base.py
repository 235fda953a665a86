"""
Shared pieces of the resource models: the compile environment, content-ids and
attribute validation.
"""

from __future__ import annotations

from collections.abc import Collection, Iterable
from dataclasses import dataclass

import structlog

from manifest_verifier.frontend.graph import PrimitiveResource
from manifest_verifier.fsir.exceptions import InvalidPath
from manifest_verifier.fsir.paths import Path, parent_closure
from manifest_verifier.fsir.syntax import (
    CreateFile,
    FsExpr,
    If,
    IsFile,
    Rm,
    idemdir,
    seq,
)

from .exceptions import InvalidAttributes
from .package_db import PackageDb

__all__ = [
    "AttributeReader",
    "CompileEnv",
    "RESERVED_CONTENT_PREFIXES",
    "ensure_directories",
    "install_file",
    "literal_content",
    "package_content",
    "resource_content",
]

logger = structlog.stdlib.get_logger(__name__)

RESERVED_CONTENT_PREFIXES = ("pkg:", "rsrc:", "lit:", "?")

_TRUE_VALUES = frozenset({"true", "yes"})
_FALSE_VALUES = frozenset({"false", "no"})

# Accepted on every resource type, without effect on the filesystem model.
COMMON_IGNORED_ATTRIBUTES = frozenset({"alias", "audit", "loglevel", "tag"})


@dataclass(frozen=True)
class CompileEnv:
    db: PackageDb

    @property
    def platform(self) -> str:
        return self.db.platform


def literal_content(text: str) -> str:
    """
    The content-id of a literal file content from the manifest.

    Literals that look like generated ids get a ``lit:`` prefix, so a literal
    never equals a generated id.
    """
    if text.startswith(RESERVED_CONTENT_PREFIXES):
        return f"lit:{text}"
    return text


def package_content(package: str, path: Path) -> str:
    return f"pkg:{package}:{path}"


def resource_content(rtype: str, title: str) -> str:
    return f"rsrc:{rtype}:{title}"


def install_file(path: Path, content: str) -> FsExpr:
    """
    Set ``path`` to a file with ``content``, replacing a file that is in the way.
    """
    return If(
        IsFile(path),
        seq(Rm(path), CreateFile(path, content)),
        CreateFile(path, content),
    )


def ensure_directories(paths: Iterable[Path]) -> list[FsExpr]:
    """
    The steps creating ``paths`` and their ancestors as directories, parents first.
    """
    directories = sorted(parent_closure(paths))
    return [idemdir(path) for path in directories if not path.is_root]


class AttributeReader:
    """
    Typed access to the attributes of a resource.

    Attributes outside ``known`` and ``ignored`` are rejected up front; ignored
    attributes are accepted and logged.
    """

    def __init__(
        self,
        resource: PrimitiveResource,
        known: Collection[str],
        ignored: Collection[str] = (),
    ):
        self.resource = resource
        for name in resource.attributes:
            if name in known:
                continue
            if name in ignored or name in COMMON_IGNORED_ATTRIBUTES:
                logger.debug(
                    "attribute_ignored", resource=str(resource), attribute=name
                )
                continue
            raise self.invalid(name, "unsupported attribute")

    def invalid(self, name: str, message: str) -> InvalidAttributes:
        return InvalidAttributes(str(self.resource), name, message)

    def has(self, name: str) -> bool:
        return self.resource.get(name) is not None

    def string(self, name: str, default: str | None = None) -> str | None:
        value = self.resource.get(name)
        match value:
            case None:
                return default
            case str():
                return value
            case int() | float():
                return str(value)
            case _:
                raise self.invalid(name, f"expected a string, got {value!r}")

    def choice(self, name: str, choices: Collection[str], default: str) -> str:
        value = self.string(name, default)
        assert value is not None
        if value not in choices:
            expected = ", ".join(sorted(choices))
            raise self.invalid(name, f"'{value}' is not one of {expected}")
        return value

    def boolean(self, name: str, default: bool = False) -> bool:
        value = self.string(name)
        if value is None:
            return default
        if value.lower() in _TRUE_VALUES:
            return True
        if value.lower() in _FALSE_VALUES:
            return False
        raise self.invalid(name, f"expected true or false, got '{value}'")

    def path(self, name: str, default: str | None = None) -> Path:
        value = self.string(name, default)
        if value is None:
            raise self.invalid(name, "a path is required")
        try:
            return Path.parse(value)
        except InvalidPath as err:
            raise self.invalid(name, err.message) from err

    def segment(self, name: str, default: str | None = None) -> str:
        """
        A value used as a single path segment, such as a user name.
        """
        value = self.string(name, default)
        if not value or value in (".", "..") or "/" in value:
            raise self.invalid(name, f"{value!r} is not a valid name")
        return value
