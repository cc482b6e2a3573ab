"""The bundled example presentations."""
from __future__ import annotations

from importlib import resources
from pathlib import Path

from .skeleton import KGraph, load

NAMES = ("omega22", "cycle2", "cycle1_entrance", "parallel2", "disjoint2", "flipcomm", "fliptwist")


def text(name: str) -> str:
    return resources.files(__package__).joinpath("corpus", f"{name}.kg").read_text(encoding="utf-8")


def graph(name: str) -> KGraph:
    if name not in NAMES:
        raise KeyError(f"no corpus graph named {name!r}")
    return load(text(name), name)


def load_file(path: str) -> KGraph:
    """Load a .kg file, falling back to a corpus name when no such file exists."""
    p = Path(path)
    if p.exists():
        return load(p.read_text(encoding="utf-8"), p.stem)
    stem = p.name[:-3] if p.name.endswith(".kg") else p.name
    if stem in NAMES:
        return graph(stem)
    raise FileNotFoundError(path)
