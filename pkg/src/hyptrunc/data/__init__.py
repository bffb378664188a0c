"""Bundled triangulation fixtures."""

from importlib.resources import files

from ..io import parse

__all__ = ["FIXTURES", "fixture_path", "load"]

FIXTURES = ("kojima_miyamoto", "one_cusp")


def fixture_path(name: str):
    return files(__name__).joinpath(f"{name}.tri")


def load(name: str):
    """Parse a bundled fixture by name (see :data:`FIXTURES`)."""
    if name not in FIXTURES:
        raise KeyError(f"unknown fixture {name!r}; choose from {', '.join(FIXTURES)}")
    return parse(fixture_path(name).read_text())
