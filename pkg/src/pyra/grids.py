"""Checkerboard grid generation and input stacking.

A grid raster is a single-channel uint8 image with values {0, 255}:
pixel (r, c) is 255 when ``(r // cell + c // cell)`` is even, so the
top-left cell is always white. The pyramid is the ordered list of grid
levels applied to one image; the default covers eight levels from 2x2
down to per-pixel cells at 256.
"""
from __future__ import annotations

from collections.abc import Iterable, Sequence

import numpy as np

from .errors import ValidationError
from .types import GridSpec
from .validation import check_image, check_same_shape

DEFAULT_GRID_SIZES: tuple[int, ...] = (2, 4, 8, 16, 32, 64, 128, 256)


def checkerboard(spec: GridSpec) -> np.ndarray:
    """Render the checkerboard raster for a grid layout as (S, S) uint8."""
    cell = spec.cell_size
    idx = np.arange(spec.image_size) // cell
    parity = (idx[:, np.newaxis] + idx[np.newaxis, :]) % 2
    return np.where(parity == 0, 255, 0).astype(np.uint8)


def stack_grid_channel(image: np.ndarray, grid: np.ndarray) -> np.ndarray:
    """Append a grid raster to an RGB image as a fourth channel.

    The first three channels of the result are the input image, untouched.
    """
    img = check_image(image, name="image")
    if img.shape[2] != 3:
        raise ValidationError(f"stacking requires a 3-channel image, got {img.shape[2]} channels")
    g = np.asarray(grid)
    if g.ndim == 3 and g.shape[2] == 1:
        g = g[:, :, 0]
    if g.ndim != 2 or g.dtype != np.uint8:
        raise ValidationError("grid raster must be a single-channel uint8 image")
    check_same_shape(img, g, "image and grid")
    return np.dstack([img, g])


def pyramid_specs(image_size: int, grid_ns: Iterable[int]) -> list[GridSpec]:
    """Validate a list of grid levels against an image size and return the
    specs in ascending n order. Duplicates and non-divisors are rejected."""
    ns = list(grid_ns)
    if not ns:
        raise ValidationError("at least one grid size is required")
    seen = set()
    for n in ns:
        if n in seen:
            raise ValidationError(f"duplicate grid size {n}")
        seen.add(n)
    return [GridSpec(n, image_size) for n in sorted(ns)]


def parse_grid_list(text: str | Sequence[int]) -> list[int]:
    """Parse a comma-separated grid list like '2,4,8' into ints."""
    if not isinstance(text, str):
        return [int(n) for n in text]
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise ValidationError(f"bad grid list {text!r}: {exc}") from exc
