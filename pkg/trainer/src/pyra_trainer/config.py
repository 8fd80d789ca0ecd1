"""Training configuration and the flat key=value config file format."""
from __future__ import annotations

from dataclasses import dataclass, fields, replace
from pathlib import Path

EXPERIMENTS = ("exp1", "exp2", "exp3", "exp4")


@dataclass(frozen=True)
class TrainConfig:
    """Desk-scale defaults: 64x64 images, six grid levels, 200 images
    split 160/40, 20 epochs."""

    learning_rate: float = 0.001
    optimizer: str = "rmsprop"
    dropout_p: float = 0.5
    epochs: int = 20
    batch_size: int = 8
    mc_samples: int = 50
    image_size: int = 64
    experiment: str = "exp3"
    n_images: int = 200
    n_train: int = 160
    grids: str = "2,4,8,16,32,64"
    seed: int = 42
    workdir: str = "runs/exp3"

    def __post_init__(self):
        if not 0.0 <= self.dropout_p < 1.0:
            raise ValueError(f"dropout_p must lie in [0, 1), got {self.dropout_p}")
        if self.mc_samples < 1:
            raise ValueError("mc_samples must be >= 1")
        if self.experiment not in EXPERIMENTS:
            raise ValueError(f"experiment must be one of {EXPERIMENTS}, got {self.experiment!r}")
        if self.optimizer != "rmsprop":
            raise ValueError("only the rmsprop optimizer family is supported")
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be > 0")
        if self.epochs < 0 or self.batch_size < 1:
            raise ValueError("epochs must be >= 0 and batch_size >= 1")
        if self.image_size < 8:
            raise ValueError("image_size must be >= 8")
        if not 0 <= self.n_train <= self.n_images:
            raise ValueError("n_train must lie in [0, n_images]")
        for n in self.grid_list():
            if self.image_size % n != 0:
                raise ValueError(f"grid size {n} does not divide image_size {self.image_size}")

    def grid_list(self) -> list[int]:
        try:
            return [int(p) for p in self.grids.split(",") if p.strip()]
        except ValueError as exc:
            raise ValueError(f"bad grids list {self.grids!r}") from exc


_FIELD_TYPES = {f.name: f.type for f in fields(TrainConfig)}
_INT_FIELDS = {"epochs", "batch_size", "mc_samples", "image_size", "n_images", "n_train", "seed"}
_FLOAT_FIELDS = {"learning_rate", "dropout_p"}


def parse_config(path, **overrides) -> TrainConfig:
    """Read a flat key=value file ('#' starts a comment) into a TrainConfig.

    Keyword overrides (e.g. from CLI flags) win over file values.
    """
    values: dict = {}
    text = Path(path).read_text(encoding="utf-8")
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{line_no}: expected key=value, got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in _FIELD_TYPES:
            raise ValueError(f"{path}:{line_no}: unknown config key {key!r}")
        if key in _INT_FIELDS:
            values[key] = int(value)
        elif key in _FLOAT_FIELDS:
            values[key] = float(value)
        else:
            values[key] = value
    values.update({k: v for k, v in overrides.items() if v is not None})
    return TrainConfig(**values)


def config_with(config: TrainConfig, **overrides) -> TrainConfig:
    return replace(config, **{k: v for k, v in overrides.items() if v is not None})
