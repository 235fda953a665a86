# ruff: noqa: F405
import os

os.environ.setdefault("LOG_LEVEL", "DEBUG")
os.environ.setdefault("VERIFIER_SOLVER_TIMEOUT", "60")

from .base import *  # noqa isort:skip
from .utils import mute_logging  # noqa isort:skip

# shut up logging
mute_logging(LOGGING)
