"""Synthetic blob dataset generator.

Each image carries 1-3 smooth ellipsoidal blobs, brighter than a textured
background, with the mask marking blob support. Generation is a pure
function of the seed, so reruns produce identical files.
"""
from __future__ import annotations

from pathlib import Path

import numpy as np
from PIL import Image

from .manifest import write_manifest


def _textured_background(rng: np.random.Generator, size: int) -> np.ndarray:
    coarse = rng.normal(0.0, 1.0, (size // 8 + 1, size // 8 + 1))
    tex = np.asarray(
        Image.fromarray((coarse * 20 + 90).clip(0, 255).astype(np.uint8)).resize(
            (size, size), Image.BILINEAR
        ),
        dtype=np.float64,
    )
    tex = tex + rng.normal(0.0, 6.0, (size, size))
    return tex


def _blob_field(rng: np.random.Generator, size: int, n_blobs: int) -> np.ndarray:
    """Sum of normalized elliptic distance fields; < 1 marks blob support."""
    yy, xx = np.mgrid[0:size, 0:size].astype(np.float64)
    field = np.full((size, size), np.inf)
    for _ in range(n_blobs):
        cy = rng.uniform(0.25, 0.75) * size
        cx = rng.uniform(0.25, 0.75) * size
        ay = rng.uniform(0.12, 0.26) * size
        ax = rng.uniform(0.12, 0.26) * size
        theta = rng.uniform(0, np.pi)
        dy, dx = yy - cy, xx - cx
        u = dy * np.cos(theta) + dx * np.sin(theta)
        v = -dy * np.sin(theta) + dx * np.cos(theta)
        d = (u / ay) ** 2 + (v / ax) ** 2
        field = np.minimum(field, d)
    return field


def make_synthetic_dataset(
    n_images: int,
    image_size: int,
    seed: int,
    out_dir,
    grid_sizes=(2, 4, 8, 16, 32, 64),
) -> Path:
    """Write images/, masks/ and manifest.jsonl under out_dir; returns the
    manifest path. Every mask is non-empty (at least one blob, centered
    well inside the frame)."""
    out_dir = Path(out_dir)
    (out_dir / "images").mkdir(parents=True, exist_ok=True)
    (out_dir / "masks").mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(seed)
    records = []
    for i in range(n_images):
        name = f"img{i:04d}"
        background = _textured_background(rng, image_size)
        field = _blob_field(rng, image_size, int(rng.integers(1, 4)))
        mask = field < 1.0
        # smooth bright bump fading toward the blob boundary
        bump = np.clip(1.0 - field, 0.0, 1.0) ** 0.7 * rng.uniform(80, 120)
        gray = np.clip(background + bump, 0, 255)
        tint = rng.uniform(0.85, 1.0, 3)
        rgb = np.clip(gray[:, :, None] * tint[None, None, :], 0, 255).astype(np.uint8)
        Image.fromarray(rgb, mode="RGB").save(out_dir / "images" / f"{name}.png", format="PNG")
        Image.fromarray(mask.astype(np.uint8) * 255, mode="L").save(
            out_dir / "masks" / f"{name}.png", format="PNG"
        )
        records.append(
            {
                "id": name,
                "image_path": f"images/{name}.png",
                "mask_path": f"masks/{name}.png",
                "split": "train",
            }
        )
    manifest_path = out_dir / "manifest.jsonl"
    header = {"image_size": image_size, "grid_sizes": sorted(grid_sizes)}
    write_manifest(header, records, manifest_path)
    return manifest_path
