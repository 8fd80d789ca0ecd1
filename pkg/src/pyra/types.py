"""Shared data model: grid geometry, manifest records, evaluation reports.

All types validate their invariants at construction and are immutable
afterwards, so instances are safe to share between threads.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

from .errors import ManifestError, ValidationError

SPLITS = ("train", "test")


@dataclass(frozen=True)
class GridSpec:
    """A checkerboard grid layout: ``n`` cells per side over a square
    ``image_size`` x ``image_size`` raster. ``image_size % n == 0`` so
    every cell is exactly ``cell_size`` pixels square."""

    n: int
    image_size: int

    def __post_init__(self):
        if not isinstance(self.n, int) or isinstance(self.n, bool):
            raise ValidationError(f"grid n must be an integer, got {self.n!r}")
        if not isinstance(self.image_size, int) or isinstance(self.image_size, bool):
            raise ValidationError(f"image_size must be an integer, got {self.image_size!r}")
        if self.n < 1:
            raise ValidationError(f"grid n must be >= 1, got {self.n}")
        if self.image_size < 1:
            raise ValidationError(f"image_size must be >= 1, got {self.image_size}")
        if self.image_size % self.n != 0:
            raise ValidationError(
                f"image_size {self.image_size} is not divisible by grid n {self.n}"
            )

    @property
    def cell_size(self) -> int:
        return self.image_size // self.n


@dataclass(frozen=True)
class SampleRecord:
    """One dataset sample. Paths are relative to the manifest's directory.

    ``grid_n`` marks a record bound to a specific grid level (set during
    expansion); ``gridded_mask_path`` / ``grid_image_path`` point at the
    generated grid-converted mask and the checkerboard raster used for it.
    """

    id: str
    image_path: str
    mask_path: str
    split: str = "train"
    grid_n: int | None = None
    gridded_mask_path: str | None = None
    grid_image_path: str | None = None

    def __post_init__(self):
        if not self.id:
            raise ValidationError("record id must be non-empty")
        # ids become file names during expansion
        if any(sep in self.id for sep in ("/", "\\")) or self.id.startswith("."):
            raise ValidationError(f"record id {self.id!r} is not a safe file name")
        if self.split not in SPLITS:
            raise ValidationError(f"record {self.id!r}: split must be one of {SPLITS}, got {self.split!r}")
        if self.grid_n is not None:
            if not isinstance(self.grid_n, int) or isinstance(self.grid_n, bool) or self.grid_n < 1:
                raise ValidationError(f"record {self.id!r}: grid_n must be a positive integer")

    def to_json_dict(self) -> dict:
        d = {"id": self.id, "image_path": self.image_path, "mask_path": self.mask_path, "split": self.split}
        if self.grid_n is not None:
            d["grid_n"] = self.grid_n
        if self.gridded_mask_path is not None:
            d["gridded_mask_path"] = self.gridded_mask_path
        if self.grid_image_path is not None:
            d["grid_image_path"] = self.grid_image_path
        return d

    @classmethod
    def from_json_dict(cls, d: dict) -> "SampleRecord":
        if not isinstance(d, dict):
            raise ValidationError(f"record must be a JSON object, got {type(d).__name__}")
        known = {"id", "image_path", "mask_path", "split", "grid_n", "gridded_mask_path", "grid_image_path"}
        unknown = set(d) - known
        if unknown:
            raise ValidationError(f"unknown record fields: {sorted(unknown)}")
        for key in ("id", "image_path", "mask_path"):
            if key not in d:
                raise ValidationError(f"record missing required field {key!r}")
        return cls(**d)


@dataclass(frozen=True)
class DatasetManifest:
    """An ordered collection of sample records plus the dataset geometry
    (square image side and the grid sizes the dataset targets)."""

    image_size: int
    grid_sizes: tuple[int, ...]
    records: tuple[SampleRecord, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "grid_sizes", tuple(self.grid_sizes))
        object.__setattr__(self, "records", tuple(self.records))
        if self.image_size < 1:
            raise ValidationError(f"image_size must be >= 1, got {self.image_size}")
        seen_n = set()
        for n in self.grid_sizes:
            GridSpec(n, self.image_size)  # divisibility check
            if n in seen_n:
                raise ManifestError(f"duplicate grid size {n}")
            seen_n.add(n)
        seen = set()
        for rec in self.records:
            if rec.id in seen:
                raise ManifestError(f"duplicate record id {rec.id!r}")
            seen.add(rec.id)
            if rec.grid_n is not None:
                GridSpec(rec.grid_n, self.image_size)

    def train_records(self) -> tuple[SampleRecord, ...]:
        return tuple(r for r in self.records if r.split == "train")

    def test_records(self) -> tuple[SampleRecord, ...]:
        return tuple(r for r in self.records if r.split == "test")

    def with_records(self, records) -> "DatasetManifest":
        return replace(self, records=tuple(records))


@dataclass(frozen=True)
class ImageScore:
    id: str
    iou: float
    dice: float

    def __post_init__(self):
        for label, v in (("iou", self.iou), ("dice", self.dice)):
            if not (0.0 <= v <= 1.0):
                raise ValidationError(f"{label} must lie in [0, 1], got {v}")
        # dice and iou measure the same overlap, so they are algebraically tied
        if abs(self.dice - (2.0 * self.iou / (1.0 + self.iou))) > 1e-9:
            raise ValidationError(
                f"inconsistent scores for {self.id!r}: dice {self.dice} vs iou {self.iou}"
            )


@dataclass(frozen=True)
class EvalReport:
    """Per-image IoU/Dice plus their arithmetic means."""

    per_image: tuple[ImageScore, ...]
    miou: float
    mean_dice: float
    count: int

    def __post_init__(self):
        object.__setattr__(self, "per_image", tuple(self.per_image))
        if self.count != len(self.per_image):
            raise ValidationError("count does not match per-image entries")
        if self.count == 0:
            raise ValidationError("report requires at least one scored pair")
        if not math.isclose(self.miou, sum(s.iou for s in self.per_image) / self.count, abs_tol=1e-12):
            raise ValidationError("miou is not the mean of per-image iou")
        if not math.isclose(self.mean_dice, sum(s.dice for s in self.per_image) / self.count, abs_tol=1e-12):
            raise ValidationError("mean_dice is not the mean of per-image dice")

    @classmethod
    def from_scores(cls, per_image) -> "EvalReport":
        scores = tuple(per_image)
        n = len(scores)
        if n == 0:
            raise ValidationError("cannot build a report from zero pairs")
        return cls(
            per_image=scores,
            miou=sum(s.iou for s in scores) / n,
            mean_dice=sum(s.dice for s in scores) / n,
            count=n,
        )

    def to_json_dict(self, decimals: int = 6) -> dict:
        return {
            "miou": round(self.miou, decimals),
            "mean_dice": round(self.mean_dice, decimals),
            "count": self.count,
            "conventions": {"both_empty": 1.0, "one_empty": 0.0},
            "per_image": [
                {"id": s.id, "iou": round(s.iou, decimals), "dice": round(s.dice, decimals)}
                for s in self.per_image
            ],
        }
