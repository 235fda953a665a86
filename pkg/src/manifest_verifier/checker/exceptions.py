from manifest_verifier.exceptions import VerifierError


class CheckerError(VerifierError):
    pass


class BudgetExceeded(CheckerError):
    def __init__(self, budget: str, limit: float):
        self.budget = budget
        self.limit = limit
        super().__init__(
            f"The exploration exceeded its {budget} budget of {limit:g}. "
            "Add dependencies or raise the budget."
        )


class DeterminismRequired(CheckerError):
    """
    The check is only meaningful for a manifest shown to be deterministic.
    """

    def __init__(self, check: str, verdict=None):
        self.check = check
        #: the verdict of the determinism check, when one was made
        self.verdict = verdict
        super().__init__(
            f"The {check} check requires the manifest to be deterministic."
        )


class ReplayFailure(CheckerError):
    """
    A counterexample could not be reproduced by concrete evaluation. This is a
    bug in the verifier, not in the manifest.
    """
