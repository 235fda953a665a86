from manifest_verifier.exceptions import VerifierError


class ResourceModelError(VerifierError):
    pass


class InvalidAttributes(ResourceModelError):
    def __init__(self, resource: str, attribute: str, message: str):
        self.resource = resource
        self.attribute = attribute
        super().__init__(f"{resource}: invalid attribute '{attribute}': {message}")


class UnknownPackage(ResourceModelError):
    def __init__(self, name: str, platform: str):
        self.name = name
        self.platform = platform
        super().__init__(f"Package '{name}' is not known for platform '{platform}'.")


class UnknownPlatform(ResourceModelError):
    pass


class PackageListingError(ResourceModelError):
    def __init__(self, message: str, line: int):
        self.line = line
        super().__init__(f"line {line}: {message}")


class PackageDbError(ResourceModelError):
    pass
