"""JSON schemas for the batch, certificate and report documents."""

import json
from importlib import resources


def load(name: str) -> dict:
    """Load ``<name>.schema.json`` (``batch``, ``certificate`` or ``report``)."""
    return json.loads(resources.files(__name__).joinpath(f"{name}.schema.json").read_text())
