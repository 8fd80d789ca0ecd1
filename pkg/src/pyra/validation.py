"""Input validation helpers.

Arrays are the working representation: uint8 ``(H, W, C)`` rasters with
C in {1, 3, 4}, boolean ``(H, W)`` masks, and float64 ``(H, W)`` maps with
values in [0, 1] (probabilities) or [0, 0.5] (per-pixel std). The helpers
below check and canonicalize at API boundaries so the core functions can
assume well-formed inputs.
"""
from __future__ import annotations

import numpy as np

from .errors import ValidationError

VALID_CHANNELS = (1, 3, 4)


def check_image(arr, name: str = "image") -> np.ndarray:
    """Validate an 8-bit raster and return it as a (H, W, C) uint8 array.

    2-D input is treated as single-channel.
    """
    a = np.asarray(arr)
    if a.dtype != np.uint8:
        raise ValidationError(f"{name}: expected uint8 samples, got {a.dtype}")
    if a.ndim == 2:
        a = a[:, :, np.newaxis]
    if a.ndim != 3:
        raise ValidationError(f"{name}: expected (H, W) or (H, W, C) shape, got {a.shape}")
    if a.shape[2] not in VALID_CHANNELS:
        raise ValidationError(f"{name}: channels must be one of {VALID_CHANNELS}, got {a.shape[2]}")
    if a.shape[0] < 1 or a.shape[1] < 1:
        raise ValidationError(f"{name}: empty raster {a.shape}")
    return a


def check_mask(arr, name: str = "mask") -> np.ndarray:
    """Validate a binary mask and return it as a (H, W) bool array."""
    a = np.asarray(arr)
    if a.dtype != np.bool_:
        raise ValidationError(f"{name}: expected boolean samples, got {a.dtype}")
    if a.ndim != 2:
        raise ValidationError(f"{name}: expected (H, W) shape, got {a.shape}")
    if a.shape[0] < 1 or a.shape[1] < 1:
        raise ValidationError(f"{name}: empty mask {a.shape}")
    return a


def _check_unit_map(arr, upper: float, name: str) -> np.ndarray:
    a = np.asarray(arr, dtype=np.float64)
    if a.ndim != 2:
        raise ValidationError(f"{name}: expected (H, W) shape, got {a.shape}")
    if a.shape[0] < 1 or a.shape[1] < 1:
        raise ValidationError(f"{name}: empty map {a.shape}")
    if not np.isfinite(a).all():
        raise ValidationError(f"{name}: contains non-finite values")
    lo, hi = float(a.min()), float(a.max())
    if lo < 0.0 or hi > upper:
        raise ValidationError(f"{name}: values must lie in [0, {upper}], got range [{lo}, {hi}]")
    return a


def check_prob_map(arr, name: str = "probability map") -> np.ndarray:
    """Validate a probability map (values in [0, 1]) as float64 (H, W)."""
    return _check_unit_map(arr, 1.0, name)


def check_std_map(arr, name: str = "std map") -> np.ndarray:
    """Validate an uncertainty map (population std of [0,1] values, so
    bounded by 0.5) as float64 (H, W)."""
    return _check_unit_map(arr, 0.5, name)


def check_same_shape(a: np.ndarray, b: np.ndarray, what: str = "inputs") -> None:
    if a.shape[:2] != b.shape[:2]:
        raise ValidationError(f"dimension mismatch between {what}: {a.shape[:2]} vs {b.shape[:2]}")
