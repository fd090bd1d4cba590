"""Locating and applying the JSON schemas of the report files."""

import json
import os
from pathlib import Path

_NAMES = {
    "report.json": "report",
    "classify.json": "classify",
    "limits.json": "limits",
    "constants.json": "constants",
}


def _schema_dir():
    env = os.environ.get("KIRCHHOFF_SCHEMA_DIR")
    if env:
        return Path(env)
    here = Path(__file__).resolve().parent
    for candidate in (here / "schema_files", here.parent.parent / "schemas"):
        if candidate.is_dir():
            return candidate
    raise FileNotFoundError("schema directory not found; set KIRCHHOFF_SCHEMA_DIR")


def schema_path(name):
    """Path of ``<name>.schema.json``; ``name`` may also be a report file name."""
    stem = _NAMES.get(name, name)
    return _schema_dir() / f"{stem}.schema.json"


def validate_report(path):
    """Validates a report file against its schema (needs jsonschema)."""
    import jsonschema

    path = Path(path)
    with open(schema_path(path.name)) as fh:
        schema = json.load(fh)
    with open(path) as fh:
        doc = json.load(fh)
    jsonschema.validate(doc, schema)
    return doc
