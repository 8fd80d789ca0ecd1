"""Panel rendering: grid overlays, confidence colorization, result strips.

Confidence maps use a linear black-to-yellow ramp: std 0 renders black
(fully confident), the 0.5 bound renders pure yellow. Rendering is fully
deterministic; output PNGs carry no metadata.
"""
from __future__ import annotations

import numpy as np

from .errors import ValidationError
from .grids import checkerboard
from .types import GridSpec
from .validation import check_image, check_mask, check_prob_map, check_same_shape, check_std_map

SEPARATOR_WIDTH = 2


def _round_half_up(x: np.ndarray) -> np.ndarray:
    return np.floor(x + 0.5).astype(np.uint8)


def overlay_grid(image, grid, alpha: float = 0.35) -> np.ndarray:
    """Alpha-blend a grid raster over an RGB image, rounding half-up."""
    if not 0.0 <= alpha <= 1.0:
        raise ValidationError(f"alpha must lie in [0, 1], got {alpha}")
    img = check_image(image, name="image")
    if img.shape[2] != 3:
        raise ValidationError(f"overlay requires a 3-channel image, got {img.shape[2]} channels")
    g = np.asarray(grid)
    if g.ndim == 3 and g.shape[2] == 1:
        g = g[:, :, 0]
    if g.ndim != 2 or g.dtype != np.uint8:
        raise ValidationError("grid raster must be a single-channel uint8 image")
    check_same_shape(img, g, "image and grid")
    blended = (1.0 - alpha) * img.astype(np.float64) + alpha * g[:, :, np.newaxis].astype(np.float64)
    return _round_half_up(blended)


def colorize_std(std) -> np.ndarray:
    """Map std values linearly onto RGB(0,0,0)..RGB(255,255,0)."""
    s = check_std_map(std)
    level = _round_half_up(s / 0.5 * 255.0)
    out = np.zeros((*s.shape, 3), dtype=np.uint8)
    out[:, :, 0] = level
    out[:, :, 1] = level
    return out


def _to_rgb(gray: np.ndarray) -> np.ndarray:
    return np.repeat(gray[:, :, np.newaxis], 3, axis=2)


def render_panel(image, gridded_gt, mean, std, spec: GridSpec, alpha: float = 0.35) -> np.ndarray:
    """Compose the four-tile strip [grid overlay | GT | mean | std colors].

    Tiles are separated by 2-pixel white columns, so the output is
    ``image_size`` tall and ``4 * image_size + 6`` wide.
    """
    img = check_image(image, name="image")
    gt = check_mask(gridded_gt, name="gridded ground truth")
    mean_map = check_prob_map(mean, name="mean map")
    std_map = check_std_map(std, name="std map")
    size = (spec.image_size, spec.image_size)
    for name, shape in (
        ("image", img.shape[:2]),
        ("gridded ground truth", gt.shape),
        ("mean map", mean_map.shape),
        ("std map", std_map.shape),
    ):
        if shape != size:
            raise ValidationError(f"{name} shape {shape} does not match grid image_size {spec.image_size}")

    tiles = [
        overlay_grid(img, checkerboard(spec), alpha=alpha),
        _to_rgb(gt.astype(np.uint8) * 255),
        _to_rgb(_round_half_up(mean_map * 255.0)),
        colorize_std(std_map),
    ]
    separator = np.full((spec.image_size, SEPARATOR_WIDTH, 3), 255, dtype=np.uint8)
    strip = []
    for i, tile in enumerate(tiles):
        if i:
            strip.append(separator)
        strip.append(tile)
    return np.concatenate(strip, axis=1)
