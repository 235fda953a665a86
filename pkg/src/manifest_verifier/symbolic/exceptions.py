from manifest_verifier.exceptions import VerifierError
from manifest_verifier.fsir.paths import Path


class SymbolicError(VerifierError):
    pass


class MissingPath(SymbolicError):
    def __init__(self, path: Path):
        self.path = path
        super().__init__(f"Path {path} is outside the domain of the query.")


class SolverFailure(SymbolicError):
    """
    The solver did not produce a verdict: it crashed, rejected the script or
    answered ``unknown``.
    """


class SolverTimeout(SolverFailure):
    def __init__(self, timeout: float):
        self.timeout = timeout
        super().__init__(f"The solver did not answer within {timeout:g} seconds.")


class DecodingFailure(SymbolicError):
    pass
