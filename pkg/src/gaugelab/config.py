"""Scenario parameter files.

Format: one ``key = value`` pair per line. Blank lines and ``#`` comments are
ignored. Values are parsed as JSON when possible (numbers, ``true``/``false``,
quoted strings, lists) and otherwise kept as bare strings::

    # soft-Coulomb run at double resolution
    n = 2048
    kappa = 1.0
    kind = dirac
"""

from __future__ import annotations

import json

from .errors import ConfigError


def parse_config(text: str) -> dict:
    params = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if not key.isidentifier():
            raise ConfigError(f"line {lineno}: invalid key {key!r}")
        if key in params:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        try:
            params[key] = json.loads(value)
        except json.JSONDecodeError:
            params[key] = value
    return params


def load_config(path) -> dict:
    with open(path) as fh:
        return parse_config(fh.read())


def validate_params(defaults: dict, overrides: dict) -> dict:
    """Merge ``overrides`` into ``defaults``, coercing each value to the default's type."""
    unknown = sorted(set(overrides) - set(defaults))
    if unknown:
        raise ConfigError(f"unknown parameters: {', '.join(unknown)}; allowed: {', '.join(sorted(defaults))}")
    merged = dict(defaults)
    for key, value in overrides.items():
        default = defaults[key]
        try:
            if isinstance(default, bool):
                if not isinstance(value, bool):
                    raise TypeError
                merged[key] = value
            elif isinstance(default, int):
                if isinstance(value, bool) or float(value) != int(value):
                    raise TypeError
                merged[key] = int(value)
            elif isinstance(default, float):
                if isinstance(value, bool):
                    raise TypeError
                merged[key] = float(value)
            elif isinstance(default, (list, tuple)):
                merged[key] = [float(v) for v in value]
            else:
                merged[key] = str(value)
        except (TypeError, ValueError):
            raise ConfigError(f"parameter {key!r}: cannot use {value!r} where {type(default).__name__} is expected")
    return merged
