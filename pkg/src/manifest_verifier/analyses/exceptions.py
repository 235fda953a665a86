from manifest_verifier.exceptions import VerifierError
from manifest_verifier.fsir.paths import Path


class AnalysisFailure(VerifierError):
    pass


class PruneInapplicable(AnalysisFailure):
    def __init__(self, path: Path, reason: str):
        self.path = path
        self.reason = reason
        super().__init__(f"Cannot prune {path}: {reason}.")
