"""
Library settings.

Values come from ``settings.ERASURE_CHI`` and fall back to ``DEFAULTS``;
access them as attributes of ``erasure_settings``, e.g.
``erasure_settings.EPSILON_MIX``.
"""
from typing import Any

from django.conf import settings
from django.core.exceptions import ImproperlyConfigured


DEFAULTS: dict[str, Any] = {
    'DEFAULT_SEED': 0,
    'DEFAULT_DIMS': [2, 3, 4],
    'DEFAULT_LETTERS': 3,
    'DEFAULT_TRIALS': 1000,
    'DEFAULT_TOL': 1e-9,
    'EPSILON_MIX': 1e-10,
    'SIGNIFICANT_DIGITS': 12,
    'MAX_ITER': 10000,
}


class ErasureSettings:
    """Attribute access to the merged library settings."""

    def __init__(self, defaults: dict[str, Any]):
        self.defaults = defaults

    @property
    def user_settings(self) -> dict[str, Any]:
        try:
            return getattr(settings, 'ERASURE_CHI', {})
        except ImproperlyConfigured:
            return {}

    def __getattr__(self, attr: str) -> Any:
        if attr not in self.defaults:
            raise AttributeError(f"Invalid erasure setting: '{attr}'")
        return self.user_settings.get(attr, self.defaults[attr])


erasure_settings = ErasureSettings(DEFAULTS)
