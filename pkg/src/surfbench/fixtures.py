"""Access to the packaged fixture files (tables, logs, scripts).

The SURFBENCH_FIXTURES environment variable overrides the directory,
which lets the CLI run against external fixture sets.
"""

from __future__ import annotations

import os
from importlib import resources
from pathlib import Path


def fixture_dir() -> Path:
    override = os.environ.get("SURFBENCH_FIXTURES")
    if override:
        return Path(override)
    return Path(resources.files("surfbench") / "fixtures")


def fixture_path(name: str) -> Path:
    p = fixture_dir() / name
    if not p.exists():
        raise FileNotFoundError(f"no fixture {name!r} in {fixture_dir()}")
    return p


def fixture_text(name: str) -> str:
    return fixture_path(name).read_text()


def fixture_names() -> list[str]:
    return sorted(p.name for p in fixture_dir().iterdir() if p.is_file())
