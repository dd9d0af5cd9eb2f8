"""Small networks shipped with the package, used by tests and the acceptance suite."""
from __future__ import annotations

from importlib import resources
from pathlib import Path

from ..network import NetworkError, ParsedNetwork, ParseError, parse_network_file

NAMES = ("fix_a", "fix_b", "fix_c", "fix_d_l", "fix_d_r", "stack", "wshape", "camel", "wfence", "wheat_u",
         "wheat_d")


class MissingFixture(FileNotFoundError):
    pass


def fixture_text(name: str, directory: str | Path | None = None) -> str:
    try:
        if directory is not None:
            return (Path(directory) / f"{name}.net").read_text(encoding="utf-8")
        return resources.files(__package__).joinpath(f"{name}.net").read_text(encoding="utf-8")
    except (FileNotFoundError, OSError) as exc:
        raise MissingFixture(f"fixture {name!r} not found") from exc


def load_fixture(name: str, directory: str | Path | None = None) -> ParsedNetwork:
    """Parse a fixture; an unreadable or corrupted file counts as missing."""
    try:
        return parse_network_file(fixture_text(name, directory))
    except (ParseError, NetworkError) as exc:
        raise MissingFixture(f"fixture {name!r} is corrupted: {exc}") from exc
