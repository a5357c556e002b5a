"""Run-time defaults, overridable by PREPROJ_<KEY> environment variables and then by command-line flags."""

import os
from typing import Any

from rep_core import SearchBudget

ENV_PREFIX = "PREPROJ_"

DEFAULTS = {
    "seed": 0,
    "trials": 20,
    "random_elements": 64,
    "word_length": 4,
    "exhaustive_bound": 1 << 20,
    "split_attempts": 40,
    "retries": 20,
    "timeout": 60.0,
}


class InvalidSetting(ValueError):
    def __init__(self, key: str, value: str):
        self.key = key
        self.value = value

    def __str__(self):
        return f"Setting {self.key!r} cannot be {self.value!r}."


class Config:
    def __init__(self, environ: dict | None = None):
        self._defaults = {}
        self._overrides = {}
        self._environ = os.environ if environ is None else environ

    @classmethod
    def get_conf(cls, environ: dict | None = None) -> "Config":
        conf = cls(environ)
        conf.register(**DEFAULTS)
        return conf

    def register(self, **defaults):
        self._defaults.update(defaults)

    def override(self, **values):
        """Flag values; None means the flag was not given."""
        for key, value in values.items():
            if key not in self._defaults:
                raise KeyError(key)
            if value is not None:
                self._overrides[key] = value

    def get(self, key: str) -> Any:
        if key in self._overrides:
            return self._overrides[key]
        default = self._defaults[key]
        raw = self._environ.get(ENV_PREFIX + key.upper())
        if raw is None:
            return default
        try:
            return type(default)(raw)
        except ValueError:
            raise InvalidSetting(key, raw)

    def budget(self) -> SearchBudget:
        return SearchBudget(
            random_elements=self.get("random_elements"),
            word_length=self.get("word_length"),
            exhaustive_bound=self.get("exhaustive_bound"),
            split_attempts=self.get("split_attempts"),
        )
