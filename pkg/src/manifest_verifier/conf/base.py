from pathlib import Path

import structlog

from manifest_verifier.logging.processors import truncate_long_values

from .utils import config

PACKAGE_DIR = Path(__file__).resolve().parent.parent
BASE_DIR = PACKAGE_DIR.parent.parent

#
# LOGGING
#
LOG_LEVEL = config(
    "LOG_LEVEL",
    default="WARNING",
    help_text=(
        "Control the verbosity of logging output. "
        "Available values are ``CRITICAL``, ``ERROR``, ``WARNING``, ``INFO`` "
        "and ``DEBUG``."
    ),
    group="Logging",
)
LOG_STDOUT = config(
    "LOG_STDOUT",
    default=True,
    cast=bool,
    help_text=(
        "Emit logs on the console (standard error). When disabled, logs are written "
        "to a rotating JSON file in ``LOGGING_DIR``."
    ),
    group="Logging",
)
LOGGING_DIR = Path(
    config(
        "LOGGING_DIR",
        default=str(BASE_DIR / "log"),
        help_text="Directory for the JSON log file when ``LOG_STDOUT`` is disabled.",
        group="Logging",
    )
)
LOG_FORMAT_CONSOLE = config(
    "LOG_FORMAT_CONSOLE",
    default="plain_console",
    help_text="Console log format, either ``json`` or ``plain_console``.",
    group="Logging",
)
LOG_MAX_VALUE_LENGTH = config(
    "LOG_MAX_VALUE_LENGTH",
    default=50,
    cast=int,
    help_text=(
        "Collections in log events are cut off after this many items and strings "
        "after ten times as many characters. Set to 0 to disable."
    ),
    group="Logging",
)

_foreign_pre_chain = [
    structlog.contextvars.merge_contextvars,
    structlog.processors.TimeStamper(fmt="iso"),
    structlog.stdlib.add_logger_name,
    structlog.stdlib.add_log_level,
    structlog.stdlib.ExtraAdder(),
    structlog.stdlib.PositionalArgumentsFormatter(),
]

LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        # structlog - foreign_pre_chain handles logs coming from stdlib logging module,
        # while the `structlog.configure` call handles everything coming from structlog.
        # They are mutually exclusive.
        "json": {
            "()": structlog.stdlib.ProcessorFormatter,
            "processor": structlog.processors.JSONRenderer(),
            "foreign_pre_chain": _foreign_pre_chain,
        },
        "plain_console": {
            "()": structlog.stdlib.ProcessorFormatter,
            "processor": structlog.dev.ConsoleRenderer(colors=False),
            "foreign_pre_chain": _foreign_pre_chain,
        },
    },
    "handlers": {
        "null": {  # used by the ``mute_logging`` util
            "level": "DEBUG",
            "class": "logging.NullHandler",
        },
        "console": {
            "level": "DEBUG",
            "class": "logging.StreamHandler",
            "stream": "ext://sys.stderr",
            "formatter": LOG_FORMAT_CONSOLE,
        },
        "json_file": {
            "level": "DEBUG",
            "class": "logging.handlers.RotatingFileHandler",
            "filename": LOGGING_DIR / "verifier.jsonl",
            "formatter": "json",
            "maxBytes": 1024 * 1024 * 10,  # 10 MB
            "backupCount": 10,
            "delay": True,
        },
    },
    "loggers": {
        "manifest_verifier": {
            "handlers": ["json_file"] if not LOG_STDOUT else ["console"],
            "level": LOG_LEVEL,
            "propagate": False,
        },
    },
}

structlog.configure(
    processors=[
        structlog.contextvars.merge_contextvars,
        structlog.stdlib.filter_by_level,
        structlog.processors.TimeStamper(fmt="iso"),
        structlog.stdlib.add_logger_name,
        structlog.stdlib.add_log_level,
        truncate_long_values,
        structlog.stdlib.PositionalArgumentsFormatter(),
        structlog.processors.StackInfoRenderer(),
        structlog.processors.format_exc_info,
        structlog.processors.UnicodeDecoder(),
        structlog.stdlib.ProcessorFormatter.wrap_for_formatter,
    ],
    logger_factory=structlog.stdlib.LoggerFactory(),
    cache_logger_on_first_use=True,
)

#
# PACKAGE DATABASE
#
PLATFORM = config(
    "VERIFIER_PLATFORM",
    default="ubuntu-trusty",
    help_text=(
        "Platform whose package file lists are used to model ``package`` resources. "
        "Must match a ``<platform>.json`` document in the package database."
    ),
    group="Package database",
)
PACKAGE_DB = Path(
    config(
        "VERIFIER_PACKAGE_DB",
        default=str(PACKAGE_DIR / "resources" / "fixtures" / "packages"),
        help_text=(
            "Directory holding one JSON document per platform with the files "
            "each package installs. Defaults to the bundled fixture database."
        ),
        group="Package database",
    )
)

#
# SOLVER
#
SOLVER_PATH = config(
    "VERIFIER_SOLVER_PATH",
    default="z3",
    help_text="Name or path of an SMT-LIB 2 solver binary.",
    group="Solver",
)
SOLVER_ARGS = config(
    "VERIFIER_SOLVER_ARGS",
    default="-in",
    help_text=(
        "Arguments making the solver read a script from standard input, "
        "whitespace separated."
    ),
    group="Solver",
)
SOLVER_TIMEOUT = config(
    "VERIFIER_SOLVER_TIMEOUT",
    default=300,
    cast=int,
    help_text="Timeout for a single solver query, in seconds.",
    group="Solver",
)
SMT_LOGIC = config(
    "VERIFIER_SMT_LOGIC",
    default="QF_DT",
    help_text=(
        "Logic announced with ``set-logic``. When the solver rejects it, the query "
        "is repeated with ``ALL``."
    ),
    group="Solver",
)

#
# ANALYSIS BUDGETS
#
BRANCH_BUDGET = config(
    "VERIFIER_BRANCH_BUDGET",
    default=10_000,
    cast=int,
    help_text=(
        "Maximum number of symbolic branches explored for one determinism check. "
        "Exceeding it is reported as an analysis error."
    ),
    group="Analysis",
)
TIME_BUDGET = config(
    "VERIFIER_TIME_BUDGET",
    default=600,
    cast=int,
    help_text="Wall-clock limit for exploring the orderings of one graph, in seconds.",
    group="Analysis",
)
