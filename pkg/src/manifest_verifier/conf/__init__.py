"""
Settings access.

The active settings module is named by ``MANIFEST_VERIFIER_SETTINGS`` and imported
on first attribute access, so :func:`manifest_verifier.setup.setup_env` can load
the ``.env`` file before any option is read.
"""

import importlib
import os
from types import ModuleType

ENVIRONMENT_VARIABLE = "MANIFEST_VERIFIER_SETTINGS"
DEFAULT_SETTINGS_MODULE = "manifest_verifier.conf.base"


class LazySettings:
    _wrapped: ModuleType | None = None

    def _setup(self) -> ModuleType:
        module_name = os.environ.get(ENVIRONMENT_VARIABLE, DEFAULT_SETTINGS_MODULE)
        self._wrapped = importlib.import_module(module_name)
        return self._wrapped

    def __getattr__(self, name: str):
        if not name.isupper():
            raise AttributeError(name)
        wrapped = self._wrapped or self._setup()
        return getattr(wrapped, name)


settings = LazySettings()
