"""
Bootstrap the environment.

Load the configuration from the .env file and store it in the environment, so
it is available when the settings module is imported, then configure logging.
"""

import logging.config  # noqa: TID251
import os
from pathlib import Path

import structlog
from dotenv import load_dotenv

from manifest_verifier.conf import ENVIRONMENT_VARIABLE, settings

logger = structlog.stdlib.get_logger(__name__)


def setup_env(settings_module: str = "manifest_verifier.conf.base") -> None:
    # load the environment variables containing the config
    dotenv_path = Path(__file__).resolve().parent.parent.parent / ".env"
    load_dotenv(dotenv_path)

    os.environ.setdefault(ENVIRONMENT_VARIABLE, settings_module)

    if not settings.LOG_STDOUT:
        settings.LOGGING_DIR.mkdir(parents=True, exist_ok=True)
    logging.config.dictConfig(settings.LOGGING)

    structlog.contextvars.bind_contextvars(source="cli")
    logger.debug(
        "environment_configured", settings_module=os.environ[ENVIRONMENT_VARIABLE]
    )
