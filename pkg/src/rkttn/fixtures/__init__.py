"""Bundled tableau and problem files."""

from __future__ import annotations

from pathlib import Path

FIXTURE_DIR = Path(__file__).resolve().parent


def fixture_path(name: str) -> Path:
    path = FIXTURE_DIR / name
    if not path.is_file():
        raise FileNotFoundError(f"no bundled fixture named {name!r}")
    return path


def available() -> list[str]:
    return sorted(p.name for p in FIXTURE_DIR.glob("*.json"))
