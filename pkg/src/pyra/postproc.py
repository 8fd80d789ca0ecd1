"""Grid-snap post-processing.

Averages a prediction over each grid cell (a non-overlapping window the
size of the cell) and thresholds the cell mean, producing a grid-aligned
mask. With one-pixel cells (n == image_size) this reduces to plain
thresholding, so it has no effect at full grid resolution.
"""
from __future__ import annotations

import numpy as np

from .errors import ValidationError
from .types import GridSpec
from .validation import check_prob_map


def snap_to_grid(pred, spec: GridSpec, cell_threshold: float = 0.5) -> np.ndarray:
    """Snap a probability map to the grid: cell true iff its mean > threshold."""
    if not 0.0 <= cell_threshold <= 1.0:
        raise ValidationError(f"cell_threshold must lie in [0, 1], got {cell_threshold}")
    p = check_prob_map(pred, name="prediction")
    if p.shape != (spec.image_size, spec.image_size):
        raise ValidationError(
            f"prediction shape {p.shape} does not match grid image_size {spec.image_size}"
        )
    c = spec.cell_size
    cell_means = p.reshape(spec.n, c, spec.n, c).mean(axis=(1, 3))
    occupied = cell_means > cell_threshold
    return np.repeat(np.repeat(occupied, c, axis=0), c, axis=1)
