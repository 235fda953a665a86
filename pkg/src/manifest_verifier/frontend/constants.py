from enum import StrEnum


class ResourceType(StrEnum):
    file = "file"
    package = "package"
    user = "user"
    group = "group"
    ssh_authorized_key = "ssh_authorized_key"

    @property
    def reference_name(self) -> str:
        """
        The capitalized form used in references, e.g. ``Ssh_authorized_key``.
        """
        return self.value.capitalize()


class MetaParameter(StrEnum):
    before = "before"
    require = "require"


#: Resource types Puppet knows about but the verifier has no model for.
UNSUPPORTED_RESOURCE_TYPES = frozenset(
    {
        "augeas",
        "cron",
        "exec",
        "host",
        "mount",
        "notify",
        "schedule",
        "service",
        "stage",
        "tidy",
    }
)

#: Metaparameters that would need features outside the modelled subset.
UNSUPPORTED_METAPARAMETERS = frozenset({"notify", "subscribe", "stage", "schedule"})

#: Language constructs outside the supported manifest subset.
UNSUPPORTED_KEYWORDS = frozenset(
    {
        "case",
        "class",
        "else",
        "elsif",
        "if",
        "import",
        "include",
        "inherits",
        "node",
        "unless",
    }
)
