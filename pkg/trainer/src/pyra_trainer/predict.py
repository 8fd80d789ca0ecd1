"""Monte-Carlo sampling export.

The trained model stays in train mode so its dropout layers remain
stochastic; each test input is forwarded K times and every sigmoid output
is written as a 16-bit probability map under samples/<id>/sample_k.png,
the layout the toolkit's aggregate command consumes. Files are written
atomically (temp + rename).
"""
from __future__ import annotations

import hashlib
import os
from pathlib import Path

import numpy as np
import torch
from PIL import Image

from .data import StackedGridDataset
from .manifest import read_manifest, split_records
from .train import load_model

MAP_SCALE = 65535


def _sample_seed(seed: int, image_id: str) -> int:
    digest = hashlib.blake2b(f"{seed}:{image_id}".encode(), digest_size=8).digest()
    return int.from_bytes(digest, "big") % (2**63)


def _write_map(values: np.ndarray, path: Path) -> None:
    stored = np.floor(values * MAP_SCALE + 0.5).astype(np.uint16)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    Image.fromarray(stored).save(tmp, format="PNG")
    os.replace(tmp, path)


def mc_predict(
    checkpoint_path,
    manifest_path,
    out_dir,
    k: int,
    seed: int = 42,
    default_grid_path=None,
    records: list[dict] | None = None,
) -> Path:
    """Export K sampled maps per test record; returns the samples root."""
    if k < 1:
        raise ValueError("k must be >= 1")
    manifest_path = Path(manifest_path)
    out_dir = Path(out_dir)
    model, payload = load_model(checkpoint_path)
    model.train()  # dropout active during sampling

    header, all_records = read_manifest(manifest_path)
    if header["image_size"] != payload["image_size"]:
        raise ValueError(
            f"manifest image_size {header['image_size']} does not match "
            f"checkpoint image_size {payload['image_size']}"
        )
    if records is None:
        _, records = split_records(all_records)
    if not records:
        raise ValueError("no test records to sample")

    dataset = StackedGridDataset(manifest_path.parent, records, default_grid_path)
    with torch.no_grad():
        for rec in records:
            x = dataset.input_for(rec).unsqueeze(0).repeat(k, 1, 1, 1)
            torch.manual_seed(_sample_seed(seed, rec["id"]))
            probs = torch.sigmoid(model(x)).squeeze(1).numpy().astype(np.float64)
            probs = np.clip(probs, 0.0, 1.0)
            for i in range(k):
                _write_map(probs[i], out_dir / rec["id"] / f"sample_{i:03d}.png")
    return out_dir
