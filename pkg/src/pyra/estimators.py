"""Scikit-learn compatible wrappers around the core transforms.

Each estimator is stateless (fit only validates), operates on batches
(leading N axis, or any sequence of per-item arrays) and inherits
``get_params``/``set_params`` from BaseEstimator, so the transforms
compose with sklearn pipelines and parameter search.
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from .aggregate import aggregate_samples, binarize
from .gridify import gridify_mask
from .grids import checkerboard, stack_grid_channel
from .postproc import snap_to_grid
from .types import GridSpec


def _as_batch(X) -> list[np.ndarray]:
    if isinstance(X, np.ndarray):
        return [X[i] for i in range(X.shape[0])]
    return [np.asarray(x) for x in X]


class MaskGridifier(TransformerMixin, BaseEstimator):
    """Convert boolean masks to their grid representation.

    Parameters
    ----------
    grid_n : int, default=8
        Cells per side; must divide the mask side length.
    """

    def __init__(self, grid_n: int = 8):
        self.grid_n = grid_n

    def fit(self, X, y=None):
        return self

    def transform(self, X):
        """X: (N, H, W) bool array or sequence of (H, W) masks."""
        masks = _as_batch(X)
        out = [gridify_mask(m, GridSpec(self.grid_n, m.shape[0])) for m in masks]
        return np.stack(out, axis=0)


class CheckerboardStacker(TransformerMixin, BaseEstimator):
    """Append the checkerboard raster for ``grid_n`` as a fourth channel.

    Parameters
    ----------
    grid_n : int, default=8
        Cells per side; must divide the image side length.
    """

    def __init__(self, grid_n: int = 8):
        self.grid_n = grid_n

    def fit(self, X, y=None):
        return self

    def transform(self, X):
        """X: (N, H, W, 3) uint8 array or sequence of images."""
        images = _as_batch(X)
        out = []
        for img in images:
            grid = checkerboard(GridSpec(self.grid_n, img.shape[0]))
            out.append(stack_grid_channel(img, grid))
        return np.stack(out, axis=0)


class MonteCarloAggregator(TransformerMixin, BaseEstimator):
    """Reduce per-item stacks of sampled probability maps to mean maps.

    ``transform`` returns the per-pixel means; :meth:`uncertainty` returns
    the matching per-pixel population std maps.
    """

    def fit(self, X, y=None):
        return self

    def transform(self, X):
        """X: (N, K, H, W) array or sequence of (K, H, W) sample stacks."""
        return np.stack([aggregate_samples(list(stack))[0] for stack in _as_batch(X)], axis=0)

    def uncertainty(self, X):
        return np.stack([aggregate_samples(list(stack))[1] for stack in _as_batch(X)], axis=0)


class ProbabilityBinarizer(TransformerMixin, BaseEstimator):
    """Threshold mean maps into boolean masks (strictly greater).

    Parameters
    ----------
    threshold : float, default=0.5
        Cut point, strictly inside (0, 1).
    """

    def __init__(self, threshold: float = 0.5):
        self.threshold = threshold

    def fit(self, X, y=None):
        return self

    def transform(self, X):
        """X: (N, H, W) array or sequence of probability maps."""
        return np.stack([binarize(m, self.threshold) for m in _as_batch(X)], axis=0)


class GridSnapper(TransformerMixin, BaseEstimator):
    """Snap probability maps to a grid by cell-mean thresholding.

    Parameters
    ----------
    grid_n : int, default=8
        Cells per side; must divide the map side length.
    cell_threshold : float, default=0.5
        A cell turns true when its mean exceeds this value.
    """

    def __init__(self, grid_n: int = 8, cell_threshold: float = 0.5):
        self.grid_n = grid_n
        self.cell_threshold = cell_threshold

    def fit(self, X, y=None):
        return self

    def transform(self, X):
        """X: (N, H, W) array or sequence of probability maps."""
        out = [
            snap_to_grid(m, GridSpec(self.grid_n, m.shape[0]), self.cell_threshold)
            for m in _as_batch(X)
        ]
        return np.stack(out, axis=0)
