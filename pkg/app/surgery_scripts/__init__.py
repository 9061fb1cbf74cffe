from __future__ import annotations

from importlib import resources

_SUFFIX = ".srg"


def bundled_script_names() -> list[str]:
    return sorted(
        entry.name[: -len(_SUFFIX)]
        for entry in resources.files(__package__).iterdir()
        if entry.name.endswith(_SUFFIX)
    )


def load_bundled_script(name: str) -> str:
    """Return the text of a bundled script, e.g. ``fake_cp2_3``."""
    filename = name if name.endswith(_SUFFIX) else name + _SUFFIX
    resource = resources.files(__package__).joinpath(filename)
    if not resource.is_file():
        raise KeyError(f"No bundled script named {name!r}; available: {', '.join(bundled_script_names())}")
    return resource.read_text("utf-8")


__all__ = [
    "bundled_script_names",
    "load_bundled_script",
]
