"""
Custom structlog processors.
"""

from structlog.typing import EventDict, WrappedLogger

from manifest_verifier.conf import settings


def truncate_long_values(
    logger: WrappedLogger, method_name: str, event_dict: EventDict
) -> EventDict:
    """
    Shorten oversized event values such as SMT scripts or long path lists.
    """
    limit = settings.LOG_MAX_VALUE_LENGTH
    if not limit:
        return event_dict
    for key, value in event_dict.items():
        if key == "event":
            continue
        if isinstance(value, (list, tuple, set, frozenset)) and len(value) > limit:
            value = sorted(str(item) for item in value)
            event_dict[key] = [*value[:limit], f"... {len(value) - limit} more"]
        elif isinstance(value, str) and len(value) > limit * 10:
            event_dict[key] = f"{value[: limit * 10]}... ({len(value)} characters)"
    return event_dict
