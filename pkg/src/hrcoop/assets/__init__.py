"""Bundled scenario assets: the screwing-task graph, worlds and scripts."""

from importlib import resources
from pathlib import Path


def asset_path(name: str) -> Path:
    """Filesystem path of a bundled asset file."""
    path = Path(str(resources.files(__package__).joinpath(name)))
    if not path.exists():
        raise FileNotFoundError(f"no bundled asset named {name!r}")
    return path
