"""Pyramid grid-focus augmentation toolkit for binary segmentation."""

from .aggregate import aggregate_samples, binarize
from .augment import ClassicAugmentParams, classic_augment, expand_dataset, split_dataset
from .errors import (
    CorruptImageError,
    ManifestError,
    PyraError,
    UnsupportedImageError,
    ValidationError,
)
from .estimators import (
    CheckerboardStacker,
    GridSnapper,
    MaskGridifier,
    MonteCarloAggregator,
    ProbabilityBinarizer,
)
from .gridify import cell_counts, gridify_mask
from .grids import DEFAULT_GRID_SIZES, checkerboard, pyramid_specs, stack_grid_channel
from .metrics import dice, evaluate, iou
from .postproc import snap_to_grid
from .render import colorize_std, overlay_grid, render_panel
from .types import DatasetManifest, EvalReport, GridSpec, ImageScore, SampleRecord

__version__ = "0.1.0"
MANIFEST_FORMAT_VERSION = 1
MAP_ENCODING_VERSION = 1

__all__ = [
    "aggregate_samples",
    "binarize",
    "ClassicAugmentParams",
    "classic_augment",
    "expand_dataset",
    "split_dataset",
    "CorruptImageError",
    "ManifestError",
    "PyraError",
    "UnsupportedImageError",
    "ValidationError",
    "CheckerboardStacker",
    "GridSnapper",
    "MaskGridifier",
    "MonteCarloAggregator",
    "ProbabilityBinarizer",
    "cell_counts",
    "gridify_mask",
    "DEFAULT_GRID_SIZES",
    "checkerboard",
    "pyramid_specs",
    "stack_grid_channel",
    "dice",
    "evaluate",
    "iou",
    "snap_to_grid",
    "colorize_std",
    "overlay_grid",
    "render_panel",
    "DatasetManifest",
    "EvalReport",
    "GridSpec",
    "ImageScore",
    "SampleRecord",
    "__version__",
]
