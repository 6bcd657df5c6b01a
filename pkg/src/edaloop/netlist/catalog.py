"""Component catalog: expected arity and required parameters per kind.

The catalog is a JSON data file so new component kinds can be added
without code changes. A seeded default ships with the package.
"""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

from .model import CatalogEntry

Catalog = dict[str, CatalogEntry]


def load_catalog(path: str | Path) -> Catalog:
    """Load a catalog JSON file: a list of {kind, arity, required_params}."""
    raw = json.loads(Path(path).read_text(encoding="utf-8"))
    return _from_records(raw)


def default_catalog() -> Catalog:
    """The packaged catalog covering the seeded component kinds."""
    text = resources.files("edaloop").joinpath("data/catalog.json").read_text("utf-8")
    return _from_records(json.loads(text))


def _from_records(records: list[dict]) -> Catalog:
    catalog: Catalog = {}
    for rec in records:
        entry = CatalogEntry(
            kind=rec["kind"],
            arity=int(rec["arity"]),
            required_params=tuple(rec.get("required_params", [])),
        )
        catalog[entry.kind] = entry
    return catalog
