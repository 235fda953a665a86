from __future__ import annotations

from typing import TYPE_CHECKING

from manifest_verifier.exceptions import VerifierError

if TYPE_CHECKING:
    from .syntax import Position


class ManifestError(VerifierError):
    def __init__(self, message: str, position: Position | None = None):
        self.position = position
        if position is not None:
            message = f"line {position.line}, column {position.column}: {message}"
        super().__init__(message)


class ManifestSyntaxError(ManifestError):
    pass


class DuplicateAttribute(ManifestSyntaxError):
    pass


class UnsupportedFeature(ManifestError):
    pass


class ExpansionError(ManifestError):
    pass


class UnknownType(ExpansionError):
    pass


class DuplicateResource(ExpansionError):
    pass


class UnboundVariable(ExpansionError):
    pass


class MissingResource(ExpansionError):
    pass


class RecursiveDefine(ExpansionError):
    pass


class InvalidParameter(ExpansionError):
    pass


class DependencyCycle(ExpansionError):
    def __init__(self, cycle: list[str]):
        self.cycle = cycle
        super().__init__(f"Dependency cycle: {' -> '.join([*cycle, cycle[0]])}")
