from manifest_verifier.exceptions import VerifierError


class FsIRError(VerifierError):
    pass


class InvalidPath(FsIRError):
    pass


class TreeClosureViolation(FsIRError):
    pass


class NotParentClosed(FsIRError):
    pass


class IRSyntaxError(FsIRError):
    pass
