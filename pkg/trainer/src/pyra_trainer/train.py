"""Training loop: RMSprop + per-pixel BCE on grid-converted targets."""
from __future__ import annotations

import json
import os
from pathlib import Path

import torch
from torch import nn
from torch.utils.data import DataLoader

from .config import TrainConfig
from .data import StackedGridDataset
from .manifest import read_manifest, split_records
from .unet import DropoutUNet


def check_experiment_manifest(config: TrainConfig, header: dict, records: list[dict]) -> None:
    """Reject manifest/experiment mismatches before spending train time."""
    size = header["image_size"]
    if size != config.image_size:
        raise ValueError(
            f"manifest image_size {size} does not match configured image_size {config.image_size}"
        )
    train, _ = split_records(records)
    grid_ns = {rec.get("grid_n") for rec in train}
    pyramid = grid_ns - {None, size}
    if config.experiment in ("exp3", "exp4") and not pyramid:
        raise ValueError(
            f"{config.experiment} expects a grid-expanded manifest, but no records carry grid_n < {size}"
        )
    if config.experiment in ("exp1", "exp2") and pyramid:
        raise ValueError(
            f"{config.experiment} is a baseline and must only consume grid_n = {size} records"
        )


def _atomic_save(payload, path: Path) -> None:
    tmp = path.with_suffix(path.suffix + ".tmp")
    torch.save(payload, tmp)
    os.replace(tmp, path)


def train(config: TrainConfig, manifest_path, out_dir, default_grid_path=None) -> Path:
    """Train the dropout U-Net on the manifest's train records.

    Writes model.pt (weights + config) and loss_log.jsonl (one line per
    epoch) under out_dir; returns the checkpoint path.
    """
    manifest_path = Path(manifest_path)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    header, records = read_manifest(manifest_path)
    check_experiment_manifest(config, header, records)
    train_records, _ = split_records(records)
    if not train_records:
        raise ValueError("manifest has no train records")

    torch.manual_seed(config.seed)
    dataset = StackedGridDataset(manifest_path.parent, train_records, default_grid_path)
    generator = torch.Generator().manual_seed(config.seed)
    loader = DataLoader(dataset, batch_size=config.batch_size, shuffle=True, generator=generator)

    model = DropoutUNet(in_channels=4, base_filters=16, dropout_p=config.dropout_p)
    model.train()
    optimizer = torch.optim.RMSprop(model.parameters(), lr=config.learning_rate)
    criterion = nn.BCEWithLogitsLoss()

    history = []
    log_path = out_dir / "loss_log.jsonl"
    with log_path.open("w", encoding="utf-8") as log:
        for epoch in range(config.epochs):
            total, batches = 0.0, 0
            for inputs, targets in loader:
                optimizer.zero_grad()
                loss = criterion(model(inputs), targets)
                loss.backward()
                # adaptive steps occasionally explode on small batches
                torch.nn.utils.clip_grad_norm_(model.parameters(), 1.0)
                optimizer.step()
                total += float(loss.detach())
                batches += 1
            epoch_loss = total / max(batches, 1)
            history.append(epoch_loss)
            log.write(json.dumps({"epoch": epoch, "loss": epoch_loss}) + "\n")
            log.flush()

    checkpoint = out_dir / "model.pt"
    _atomic_save(
        {
            "model_state": model.state_dict(),
            "dropout_p": config.dropout_p,
            "image_size": config.image_size,
            "history": history,
        },
        checkpoint,
    )
    return checkpoint


def load_model(checkpoint_path) -> tuple[DropoutUNet, dict]:
    checkpoint_path = Path(checkpoint_path)
    if not checkpoint_path.is_file():
        raise FileNotFoundError(f"no such checkpoint: {checkpoint_path}")
    payload = torch.load(checkpoint_path, map_location="cpu", weights_only=True)
    model = DropoutUNet(in_channels=4, base_filters=16, dropout_p=payload["dropout_p"])
    model.load_state_dict(payload["model_state"])
    return model, payload
