"""Flat key=value configuration files.

One setting per line, `#` starts a comment, blank lines are skipped.
Values stay strings until a typed accessor coerces them; command-line
flags override config values, which override built-in defaults.
"""

from __future__ import annotations

from pathlib import Path


class ConfigError(ValueError):
    pass


_BOOL = {"true": True, "yes": True, "1": True, "false": False, "no": False, "0": False}


def parse_config(text: str, source: str = "<config>") -> dict[str, str]:
    values: dict[str, str] = {}
    for n, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source} line {n}: expected key=value, got {raw.strip()!r}")
        key, value = line.split("=", 1)
        key = key.strip()
        if not key:
            raise ConfigError(f"{source} line {n}: empty key")
        if key in values:
            raise ConfigError(f"{source} line {n}: duplicate key {key!r}")
        values[key] = value.strip()
    return values


def load_config(path: str | Path) -> dict[str, str]:
    path = Path(path)
    return parse_config(path.read_text(encoding="utf-8"), source=str(path))


def get_str(values: dict[str, str], key: str, default: str) -> str:
    return values.get(key, default)


def get_int(values: dict[str, str], key: str, default: int) -> int:
    if key not in values:
        return default
    try:
        return int(values[key])
    except ValueError as exc:
        raise ConfigError(f"{key}: expected an integer, got {values[key]!r}") from exc


def get_float(values: dict[str, str], key: str, default: float) -> float:
    if key not in values:
        return default
    try:
        return float(values[key])
    except ValueError as exc:
        raise ConfigError(f"{key}: expected a number, got {values[key]!r}") from exc


def get_bool(values: dict[str, str], key: str, default: bool) -> bool:
    if key not in values:
        return default
    token = values[key].lower()
    if token not in _BOOL:
        raise ConfigError(f"{key}: expected a boolean, got {values[key]!r}")
    return _BOOL[token]


def get_list(values: dict[str, str], key: str, default: list[str] | None = None) -> list[str]:
    if key not in values:
        return list(default or [])
    return [item.strip() for item in values[key].split(",") if item.strip()]
