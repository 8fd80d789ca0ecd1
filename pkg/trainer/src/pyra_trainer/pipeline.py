"""End-to-end desk-scale pipeline.

Every dataset-shaping and scoring step goes through the ``pyra`` CLI
(split, augment, grid, aggregate, eval); this harness only generates the
synthetic data, trains the model, and exports MC samples. Experiment
regimes:

* exp1: no augmentation; loader uses full-resolution grids and raw masks.
* exp2: classic augmentations only (affine/dropout/noise), single level.
* exp3: grid-pyramid expansion.
* exp4: classic augmentations plus grid-pyramid expansion.
"""
from __future__ import annotations

import json
import shutil
import subprocess
import sys
import time
from pathlib import Path

from .config import TrainConfig
from .manifest import read_manifest, split_records
from .predict import mc_predict
from .synth import make_synthetic_dataset
from .train import train


def _pyra_command() -> list[str]:
    exe = shutil.which("pyra")
    if exe:
        return [exe]
    return [sys.executable, "-m", "pyra"]


def run_pyra(*args: str) -> None:
    cmd = _pyra_command() + [str(a) for a in args]
    proc = subprocess.run(cmd, capture_output=True, text=True)
    if proc.returncode != 0:
        raise RuntimeError(
            f"pyra call failed (exit {proc.returncode}): {' '.join(cmd)}\n{proc.stderr.strip()}"
        )


class Pipeline:
    def __init__(self, config: TrainConfig, workdir=None):
        self.config = config
        self.workdir = Path(workdir if workdir is not None else config.workdir)
        self.dataset_dir = self.workdir / "dataset"
        self.split_manifest = self.dataset_dir / "manifest_split.jsonl"
        self.expanded_dir = self.workdir / "expanded"
        self.samples_dir = self.workdir / "samples"
        self.report_path = self.workdir / "report.json"

    # -- stage wiring ----------------------------------------------------

    @property
    def uses_expansion(self) -> bool:
        return self.config.experiment in ("exp2", "exp3", "exp4")

    @property
    def train_manifest(self) -> Path:
        return self.expanded_dir / "manifest.jsonl" if self.uses_expansion else self.split_manifest

    @property
    def default_grid_path(self) -> Path | None:
        if self.uses_expansion:
            return None
        return self.dataset_dir / "grids" / f"grid_n{self.config.image_size}.png"

    def synth(self) -> Path:
        return make_synthetic_dataset(
            self.config.n_images,
            self.config.image_size,
            self.config.seed,
            self.dataset_dir,
            grid_sizes=self.config.grid_list(),
        )

    def split(self) -> Path:
        run_pyra(
            "split",
            "--manifest", self.dataset_dir / "manifest.jsonl",
            "--n-train", self.config.n_train,
            "--seed", self.config.seed,
            "--out", self.split_manifest,
            "--quiet",
        )
        return self.split_manifest

    def expand(self) -> Path:
        cfg = self.config
        if not self.uses_expansion:
            # baselines stack the full-resolution grid at load time
            grid_path = self.default_grid_path
            run_pyra(
                "grid", "--size", cfg.image_size, "--n", cfg.image_size,
                "--out", grid_path, "--quiet",
            )
            return self.split_manifest
        if cfg.experiment == "exp2":
            grids = str(cfg.image_size)
        else:
            grids = cfg.grids
        args = [
            "augment",
            "--manifest", self.split_manifest,
            "--grids", grids,
            "--out-dir", self.expanded_dir,
            "--seed", cfg.seed,
            "--quiet",
        ]
        if cfg.experiment in ("exp2", "exp4"):
            args.append("--classic")
        run_pyra(*args)
        return self.expanded_dir / "manifest.jsonl"

    def train(self) -> Path:
        return train(
            self.config, self.train_manifest, self.workdir, default_grid_path=self.default_grid_path
        )

    def predict(self) -> Path:
        return mc_predict(
            self.workdir / "model.pt",
            self.train_manifest,
            self.samples_dir,
            k=self.config.mc_samples,
            seed=self.config.seed,
            default_grid_path=self.default_grid_path,
        )

    def aggregate(self) -> None:
        run_pyra(
            "aggregate",
            "--samples-dir", self.samples_dir,
            "--out-mean", self.workdir / "mean",
            "--out-std", self.workdir / "std",
            "--out-mask", self.workdir / "pred_masks",
            "--threshold", 0.5,
            "--quiet",
        )

    def collect_ground_truth(self) -> Path:
        """Copy test-record masks next to the predictions for scoring."""
        gt_dir = self.workdir / "gt"
        gt_dir.mkdir(parents=True, exist_ok=True)
        base = self.train_manifest.parent
        _, records = read_manifest(self.train_manifest)
        _, test = split_records(records)
        for rec in test:
            shutil.copyfile(base / rec["mask_path"], gt_dir / f"{rec['id']}.png")
        return gt_dir

    def evaluate(self) -> dict:
        gt_dir = self.collect_ground_truth()
        run_pyra(
            "eval",
            "--pred-dir", self.workdir / "pred_masks",
            "--gt-dir", gt_dir,
            "--out", self.report_path,
            "--quiet",
        )
        return json.loads(self.report_path.read_text(encoding="utf-8"))

    STAGES = ("synth", "split", "expand", "train", "predict", "aggregate", "eval")

    def run(self, stages=None, log=print) -> dict | None:
        report = None
        for stage in stages or self.STAGES:
            started = time.perf_counter()
            if stage == "eval":
                report = self.evaluate()
            elif stage == "aggregate":
                self.aggregate()
            else:
                getattr(self, stage)()
            log(f"[{self.config.experiment}] {stage} done in {time.perf_counter() - started:.1f}s")
        return report
