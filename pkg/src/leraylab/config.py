"""Flat ``key=value`` configuration files mapped onto dataclasses."""
from __future__ import annotations

import dataclasses
import hashlib
from typing import TypeVar

T = TypeVar("T")


class ConfigError(ValueError):
    pass


_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off"}


def _convert(kind: str, raw: str):
    if kind == "bool":
        low = raw.lower()
        if low in _TRUE:
            return True
        if low in _FALSE:
            return False
        raise ValueError(f"expected a boolean, got {raw!r}")
    if kind == "int":
        return int(raw)
    if kind == "float":
        return float(raw)
    return raw


def _field_kinds(schema) -> dict[str, str]:
    kinds = {}
    for f in dataclasses.fields(schema):
        t = f.type if isinstance(f.type, str) else getattr(f.type, "__name__", str(f.type))
        kinds[f.name] = t
    return kinds


def parse_config(text: str, schema: type[T]) -> T:
    """Parse ``key=value`` lines into ``schema``; unspecified keys keep defaults."""
    kinds = _field_kinds(schema)
    values: dict[str, object] = {}
    seen: dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key=value, got {line!r}")
        key, _, value = (s.strip() for s in line.partition("="))
        if key not in kinds:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in seen:
            raise ConfigError(f"line {lineno}: key {key!r} already set on line {seen[key]}")
        try:
            values[key] = _convert(kinds[key], value)
        except ValueError:
            raise ConfigError(
                f"line {lineno}: key {key!r} expects {kinds[key]}, got {value!r}"
            ) from None
        seen[key] = lineno
    return schema(**values)


def canonical_text(config) -> str:
    """Every field as ``key=value``, sorted by key; parses back to an equal config."""
    lines = []
    for f in sorted(dataclasses.fields(config), key=lambda f: f.name):
        v = getattr(config, f.name)
        if isinstance(v, bool):
            s = "true" if v else "false"
        elif isinstance(v, float):
            s = repr(v)
        else:
            s = str(v)
        lines.append(f"{f.name}={s}")
    return "\n".join(lines) + "\n"


def config_hash(config) -> str:
    return hashlib.sha256(canonical_text(config).encode()).hexdigest()


def defaults_text(schema) -> str:
    return canonical_text(schema())
