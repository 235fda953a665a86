from __future__ import annotations

from manifest_verifier.frontend.graph import PrimitiveResource
from manifest_verifier.fsir.exceptions import InvalidPath
from manifest_verifier.fsir.paths import Path
from manifest_verifier.fsir.syntax import (
    ERROR,
    SKIP,
    Cp,
    CreateFile,
    DoesNotExist,
    FsExpr,
    If,
    IsDir,
    IsFile,
    Rm,
    idemdir,
    seq,
)

from .base import AttributeReader, literal_content

__all__ = ["compile_file"]

KNOWN_ATTRIBUTES = frozenset(
    {"path", "ensure", "content", "source", "force", "replace"}
)
# permissions and metadata are outside the filesystem model
IGNORED_ATTRIBUTES = frozenset(
    {
        "owner",
        "group",
        "mode",
        "backup",
        "checksum",
        "show_diff",
        "selrange",
        "selrole",
        "seltype",
        "seluser",
    }
)
ENSURE_VALUES = frozenset({"present", "absent", "file", "directory"})


def _source_path(reader: AttributeReader) -> Path:
    source = reader.string("source") or ""
    try:
        return Path.parse(source.removeprefix("file://"))
    except InvalidPath as err:
        raise reader.invalid("source", err.message) from err


def _write(path: Path, write: FsExpr, replace: bool) -> FsExpr:
    if not replace:
        return If(DoesNotExist(path), write, If(IsFile(path), SKIP, ERROR))
    return If(
        IsFile(path),
        seq(Rm(path), write),
        If(DoesNotExist(path), write, ERROR),
    )


def compile_file(resource: PrimitiveResource) -> FsExpr:
    """
    Compile a ``file`` resource.

    ``ensure`` defaults to ``file`` when content or a source is given and to
    ``present`` otherwise. Existing files are replaced; an existing directory is
    only removed for ``ensure => absent`` with ``force``.
    """
    reader = AttributeReader(resource, KNOWN_ATTRIBUTES, IGNORED_ATTRIBUTES)
    path = reader.path("path", resource.title)
    has_content = reader.has("content")
    has_source = reader.has("source")
    ensure = reader.choice(
        "ensure",
        ENSURE_VALUES,
        default="file" if has_content or has_source else "present",
    )
    force = reader.boolean("force")
    replace = reader.boolean("replace", default=True)

    if has_content and has_source:
        raise reader.invalid("source", "'content' and 'source' are exclusive")
    if ensure in ("directory", "absent"):
        for name in ("content", "source"):
            if reader.has(name):
                raise reader.invalid(name, f"not allowed with ensure => {ensure}")

    match ensure:
        case "directory":
            return idemdir(path)
        case "absent":
            return If(
                DoesNotExist(path),
                SKIP,
                If(IsDir(path), Rm(path) if force else SKIP, Rm(path)),
            )
        case _ if has_source:
            return _write(path, Cp(_source_path(reader), path), replace)
        case _ if has_content:
            content = literal_content(reader.string("content") or "")
            return _write(path, CreateFile(path, content), replace)
        case "file":
            return If(
                DoesNotExist(path),
                CreateFile(path, ""),
                If(IsFile(path), SKIP, ERROR),
            )
        case _:
            return If(DoesNotExist(path), CreateFile(path, ""), SKIP)
