"""
Hypothesis profiles for the property tests.

``HYPOTHESIS_PROFILE`` selects the profile:

- ``default``: quick local runs.
- ``ci``: more examples, derandomized so failures reproduce.
- ``acceptance``: the full volumes, e.g. ten thousand expression pairs for the
  solver/oracle agreement. Slow; run on demand.

Property tests declare both volumes through :func:`examples` instead of inline
``@settings(max_examples=...)``.
"""

import os

from hypothesis import HealthCheck, settings

PROFILE = os.environ.get("HYPOTHESIS_PROFILE", "default")

_SLOW = [HealthCheck.too_slow, HealthCheck.data_too_large]

settings.register_profile("default", deadline=None, suppress_health_check=_SLOW)
settings.register_profile(
    "ci", deadline=None, derandomize=True, suppress_health_check=_SLOW
)
settings.register_profile(
    "acceptance", deadline=None, print_blob=True, suppress_health_check=_SLOW
)
settings.load_profile(PROFILE)

_SCALE = {"default": 1, "ci": 4}


def examples(acceptance: int, default: int = 50) -> settings:
    """
    Settings running ``acceptance`` examples in the acceptance profile and a
    fraction of that otherwise.
    """
    if PROFILE == "acceptance":
        return settings(max_examples=acceptance)
    return settings(max_examples=min(acceptance, default * _SCALE.get(PROFILE, 1)))
