class VerifierError(Exception):
    """
    Base class for the expected failures of the verifier.

    Anything raised as a subclass is reported to the user without a traceback.
    """

    def __init__(self, message: str):
        self.message = message
        super().__init__(message)
