"""Manifest-driven dataset of stacked inputs and (gridded) targets."""
from __future__ import annotations

from pathlib import Path

import numpy as np
import torch
from PIL import Image
from torch.utils.data import Dataset


def load_rgb(path) -> np.ndarray:
    with Image.open(path) as im:
        return np.asarray(im.convert("RGB"), dtype=np.uint8)


def load_gray(path) -> np.ndarray:
    with Image.open(path) as im:
        if im.mode != "L":
            im = im.convert("L")
        return np.asarray(im, dtype=np.uint8)


def stacked_input(image_rgb: np.ndarray, grid_gray: np.ndarray) -> torch.Tensor:
    """Build the 4-channel float tensor (RGB + grid), scaled to [0, 1]."""
    stack = np.concatenate([image_rgb, grid_gray[:, :, None]], axis=2)
    return torch.from_numpy(stack.astype(np.float32) / 255.0).permute(2, 0, 1)


class StackedGridDataset(Dataset):
    """Yields (input, target) pairs from manifest records.

    Records lacking a grid_image_path (pre-expansion baselines) fall back
    to ``default_grid_path``, the full-resolution checkerboard; records
    lacking a gridded_mask_path use the raw mask (equivalent at the
    full-resolution level).
    """

    def __init__(self, base_dir, records: list[dict], default_grid_path=None):
        self.base_dir = Path(base_dir)
        self.records = records
        self.default_grid_path = Path(default_grid_path) if default_grid_path else None

    def __len__(self) -> int:
        return len(self.records)

    def _grid_path(self, rec: dict) -> Path:
        if rec.get("grid_image_path"):
            return self.base_dir / rec["grid_image_path"]
        if self.default_grid_path is None:
            raise ValueError(f"record {rec['id']!r} has no grid image and no default grid was provided")
        return self.default_grid_path

    def input_for(self, rec: dict) -> torch.Tensor:
        image = load_rgb(self.base_dir / rec["image_path"])
        grid = load_gray(self._grid_path(rec))
        return stacked_input(image, grid)

    def target_for(self, rec: dict) -> torch.Tensor:
        mask_rel = rec.get("gridded_mask_path") or rec["mask_path"]
        mask = load_gray(self.base_dir / mask_rel) > 127
        return torch.from_numpy(mask.astype(np.float32)).unsqueeze(0)

    def __getitem__(self, idx: int):
        rec = self.records[idx]
        return self.input_for(rec), self.target_for(rec)
