"""Minimal reader/writer for the toolkit's JSON Lines manifest format.

The harness talks to the main toolkit only through its file formats, so
this module mirrors the wire format (header line with image_size and
grid_sizes, one record object per line) without importing the toolkit.
"""
from __future__ import annotations

import json
from pathlib import Path


def read_manifest(path) -> tuple[dict, list[dict]]:
    """Return (header, records) from a manifest file."""
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines:
        raise ValueError(f"{path}: empty manifest")
    header = json.loads(lines[0])
    records = [json.loads(line) for line in lines[1:] if line.strip()]
    return header, records


def write_manifest(header: dict, records: list[dict], path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    out = [json.dumps(header, sort_keys=True, separators=(", ", ": "))]
    out.extend(json.dumps(rec, sort_keys=True, separators=(", ", ": ")) for rec in records)
    path.write_text("\n".join(out) + "\n", encoding="utf-8")


def split_records(records: list[dict]) -> tuple[list[dict], list[dict]]:
    train = [r for r in records if r.get("split", "train") == "train"]
    test = [r for r in records if r.get("split") == "test"]
    return train, test
