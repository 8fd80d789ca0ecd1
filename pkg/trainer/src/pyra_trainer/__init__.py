"""Desk-scale training and MC-dropout inference harness for the pyra toolkit."""

from .config import TrainConfig, parse_config
from .pipeline import Pipeline
from .predict import mc_predict
from .synth import make_synthetic_dataset
from .train import train
from .unet import DropoutUNet

__version__ = "0.1.0"

__all__ = [
    "TrainConfig",
    "parse_config",
    "Pipeline",
    "mc_predict",
    "make_synthetic_dataset",
    "train",
    "DropoutUNet",
    "__version__",
]
