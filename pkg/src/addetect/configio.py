"""Tiny key=value config files (# comments, blank lines ignored)."""

from __future__ import annotations

from pathlib import Path

from .errors import ConfigError


def parse_key_values(text: str) -> dict[str, str]:
    values: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {lineno}: expected key=value, got {stripped!r}")
        key, _, value = stripped.partition("=")
        values[key.strip()] = value.strip()
    return values


def load_key_values(path: str | Path) -> dict[str, str]:
    return parse_key_values(Path(path).read_text(encoding="utf-8"))


def split_list(value: str) -> list[str]:
    return [item.strip() for item in value.split(",") if item.strip()]
