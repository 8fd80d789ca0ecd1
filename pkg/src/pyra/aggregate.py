"""Monte-Carlo prediction aggregation.

K sampled probability maps reduce to a per-pixel mean (the prediction)
and a per-pixel population standard deviation (the confidence map, black
= certain). Accumulation runs in double precision with a fixed per-pixel
summation order, so results are bitwise identical across worker counts.
"""
from __future__ import annotations

from collections.abc import Sequence

import numpy as np

from .errors import ValidationError
from .validation import check_prob_map


def aggregate_samples(samples: Sequence[np.ndarray]) -> tuple[np.ndarray, np.ndarray]:
    """Reduce K probability maps to (mean, std), both float64 (H, W).

    std divides by K (population form): the K draws are the entire
    population being summarized, not a sample from a larger one.
    """
    maps = [check_prob_map(s, name=f"sample {i}") for i, s in enumerate(samples)]
    if not maps:
        raise ValidationError("aggregation requires at least one sample map")
    shape = maps[0].shape
    for i, m in enumerate(maps[1:], start=1):
        if m.shape != shape:
            raise ValidationError(f"sample {i} shape {m.shape} differs from sample 0 shape {shape}")
    stack = np.stack(maps, axis=0)
    mean = stack.mean(axis=0, dtype=np.float64)
    std = stack.std(axis=0, ddof=0, dtype=np.float64)
    # pixels where every sample agrees must reduce exactly (std == 0, mean
    # == the common value); rounding in the running sum may miss by an ulp
    constant = (stack == stack[0]).all(axis=0)
    mean = np.where(constant, stack[0], mean)
    std = np.where(constant, 0.0, std)
    return mean, std


def binarize(mean, threshold: float = 0.5) -> np.ndarray:
    """Threshold a mean map into a mask: pixel true iff value > threshold."""
    if not 0.0 < threshold < 1.0:
        raise ValidationError(f"threshold must lie strictly inside (0, 1), got {threshold}")
    m = check_prob_map(mean, name="mean map")
    return m > threshold
