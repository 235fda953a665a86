from collections.abc import Callable
from dataclasses import dataclass

from decouple import config as _config, undefined


@dataclass(frozen=True)
class EnvironmentVariable:
    name: str
    default: object
    help_text: str
    group: str

    @property
    def has_default(self) -> bool:
        return self.default is not undefined


#: Every option read through :func:`config`, for the generated configuration docs.
ENVIRONMENT_VARIABLES: dict[str, EnvironmentVariable] = {}


def wrap_config[T, **P](wrapped: Callable[P, T]):
    def inner(
        *args: P.args,
        **kwargs: P.kwargs,
    ) -> T:
        help_text = kwargs.pop("help_text", "")
        group = kwargs.pop("group", "")

        option = args[0]
        assert isinstance(option, str)
        ENVIRONMENT_VARIABLES[option] = EnvironmentVariable(
            name=option,
            default=kwargs.get("default", undefined),
            help_text=str(help_text),
            group=str(group) or "Optional",
        )
        return wrapped(*args, **kwargs)

    return inner


config = wrap_config(_config)


def mute_logging(config: dict) -> None:  # pragma: no cover
    """
    Disable (console) output from logging.

    :arg config: The logging config, the ``LOGGING`` setting.
    """

    # set up the null handler for all loggers so that nothing gets emitted
    for logger in config["loggers"].values():
        logger["handlers"] = ["null"]

    # libraries log to loggers which aren't defined, and that ends up in the root
    # logger -> add one so that we can mute that output too.
    config["loggers"].update(
        {
            "": {"handlers": ["null"], "level": "CRITICAL", "propagate": False},
        }
    )


def render_config_docs(group_order: list[str] | None = None) -> str:
    """
    Render the registered options as reStructuredText, grouped.
    """
    groups: dict[str, list[EnvironmentVariable]] = {}
    for variable in ENVIRONMENT_VARIABLES.values():
        groups.setdefault(variable.group, []).append(variable)

    ordered = [group for group in group_order or [] if group in groups]
    ordered += sorted(group for group in groups if group not in ordered)

    lines = [
        ".. _installation_config:",
        "",
        "===================================",
        "Environment configuration reference",
        "===================================",
        "",
    ]
    for group in ordered:
        lines += [group, "=" * len(group), ""]
        for variable in sorted(groups[group], key=lambda item: item.name):
            default = (
                f" Defaults to: ``{variable.default}``." if variable.has_default else ""
            )
            lines.append(f"* ``{variable.name}``: {variable.help_text}{default}")
        lines.append("")
    return "\n".join(lines)
