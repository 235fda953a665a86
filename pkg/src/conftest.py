import os

from manifest_verifier.conf import ENVIRONMENT_VARIABLE

os.environ.setdefault(ENVIRONMENT_VARIABLE, "manifest_verifier.conf.ci")
