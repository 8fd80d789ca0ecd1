"""Grid-based ground-truth conversion.

A mask is converted to a grid representation in three steps: partition it
into the grid's cells, count the true pixels per cell, and fill every
cell that contains at least one true pixel. The result is constant within
each cell and a superset of the input; at ``n == image_size`` (one-pixel
cells) the conversion is the identity.
"""
from __future__ import annotations

import numpy as np

from .errors import ValidationError
from .types import GridSpec
from .validation import check_mask


def _check_dims(mask: np.ndarray, spec: GridSpec) -> None:
    if mask.shape != (spec.image_size, spec.image_size):
        raise ValidationError(
            f"mask shape {mask.shape} does not match grid image_size {spec.image_size}"
        )


def cell_counts(mask, spec: GridSpec) -> np.ndarray:
    """Count true pixels per grid cell; returns an (n, n) int64 array."""
    m = check_mask(mask)
    _check_dims(m, spec)
    c = spec.cell_size
    return m.reshape(spec.n, c, spec.n, c).sum(axis=(1, 3), dtype=np.int64)


def gridify_mask(mask, spec: GridSpec) -> np.ndarray:
    """Convert a mask so each cell with any true pixel becomes fully true."""
    m = check_mask(mask)
    _check_dims(m, spec)
    occupied = cell_counts(m, spec) > 0
    c = spec.cell_size
    return np.repeat(np.repeat(occupied, c, axis=0), c, axis=1)
