import json

import numpy as np
import pytest
from PIL import Image

from pyra_trainer.config import TrainConfig
from pyra_trainer.manifest import read_manifest
from pyra_trainer.pipeline import Pipeline
from pyra_trainer.predict import mc_predict
from pyra_trainer.train import check_experiment_manifest, train


def _tiny_config(tmp_path, **kw) -> TrainConfig:
    defaults = dict(
        n_images=10, n_train=8, image_size=32, grids="2,4,8,16,32",
        epochs=2, mc_samples=3, workdir=str(tmp_path / "run"), experiment="exp3",
    )
    defaults.update(kw)
    return TrainConfig(**defaults)


def _prepared_pipeline(tmp_path, **kw) -> Pipeline:
    pipeline = Pipeline(_tiny_config(tmp_path, **kw))
    pipeline.run(stages=("synth", "split", "expand"), log=lambda _m: None)
    return pipeline


def test_training_consumes_expanded_records_and_logs_loss(tmp_path):
    pipeline = _prepared_pipeline(tmp_path)
    _, records = read_manifest(pipeline.train_manifest)
    train_records = [r for r in records if r["split"] == "train"]
    assert len(train_records) == 8 * 5  # train records x grid levels
    checkpoint = pipeline.train()
    assert checkpoint.is_file()
    log_lines = (pipeline.workdir / "loss_log.jsonl").read_text().splitlines()
    losses = [json.loads(line)["loss"] for line in log_lines]
    assert len(losses) == pipeline.config.epochs
    assert all(np.isfinite(losses))


def test_loss_decreases_over_training(tmp_path):
    pipeline = _prepared_pipeline(tmp_path, experiment="exp1", grids="32", epochs=8, n_images=12, n_train=10)
    pipeline.train()
    log_lines = (pipeline.workdir / "loss_log.jsonl").read_text().splitlines()
    losses = [json.loads(line)["loss"] for line in log_lines]
    assert losses[-1] < losses[0]


def test_experiment_manifest_mismatch_rejected(tmp_path):
    pipeline = _prepared_pipeline(tmp_path)  # exp3 expanded manifest
    header, records = read_manifest(pipeline.train_manifest)
    cfg_exp1 = _tiny_config(tmp_path, experiment="exp1")
    with pytest.raises(ValueError, match="baseline"):
        check_experiment_manifest(cfg_exp1, header, records)

    split_header, split_records_ = read_manifest(pipeline.split_manifest)
    with pytest.raises(ValueError, match="grid-expanded"):
        check_experiment_manifest(pipeline.config, split_header, split_records_)


def test_mc_predict_exports_k_probability_maps(tmp_path):
    pipeline = _prepared_pipeline(tmp_path)
    pipeline.train()
    out = mc_predict(
        pipeline.workdir / "model.pt", pipeline.train_manifest,
        pipeline.samples_dir, k=3, seed=7,
    )
    _, records = read_manifest(pipeline.train_manifest)
    test_ids = [r["id"] for r in records if r["split"] == "test"]
    assert test_ids
    for image_id in test_ids:
        files = sorted((out / image_id).glob("sample_*.png"))
        assert [f.name for f in files] == ["sample_000.png", "sample_001.png", "sample_002.png"]
        for f in files:
            with Image.open(f) as im:
                assert im.mode in ("I;16", "I")
                arr = np.asarray(im).astype(np.float64) / 65535.0
            assert arr.min() >= 0.0 and arr.max() <= 1.0


def test_mc_predict_is_seed_deterministic(tmp_path):
    pipeline = _prepared_pipeline(tmp_path)
    pipeline.train()
    a = mc_predict(pipeline.workdir / "model.pt", pipeline.train_manifest, tmp_path / "sa", k=2, seed=5)
    b = mc_predict(pipeline.workdir / "model.pt", pipeline.train_manifest, tmp_path / "sb", k=2, seed=5)
    for pa in sorted(a.rglob("*.png")):
        pb = b / pa.relative_to(a)
        assert pa.read_bytes() == pb.read_bytes()


def test_missing_checkpoint_reported(tmp_path):
    pipeline = _prepared_pipeline(tmp_path)
    with pytest.raises(FileNotFoundError):
        mc_predict(tmp_path / "nope.pt", pipeline.train_manifest, tmp_path / "s", k=1)


def test_exp2_pipeline_smoke(tmp_path):
    pipeline = Pipeline(_tiny_config(tmp_path, experiment="exp2", epochs=1, mc_samples=2))
    report = pipeline.run(log=lambda _m: None)
    assert report["count"] == 2
    # classic augmentation keeps the record count at the baseline size
    _, records = read_manifest(pipeline.train_manifest)
    assert len([r for r in records if r["split"] == "train"]) == 8
