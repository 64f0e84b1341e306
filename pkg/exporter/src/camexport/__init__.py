"""Produce interchange files from real CNN classifiers.

A forward hook captures the activation stack feeding a ResNet's global
average pool; together with the classifier head's weight rows this is
everything the localization core needs to compute and compare class
activation maps. Also included: the fine-tuning recipe for binary expert
models and a deterministic dataset splitter.
"""

from .export import ExportRecord, capture_activations, export_activations, native_cam
from .finetune import evaluate, finetune_expert
from .models import PREPROCESS, build_model, load_checkpoint, save_checkpoint
from .split import materialize_split, split_dataset

__version__ = "0.1.0"

__all__ = [
    "ExportRecord",
    "PREPROCESS",
    "build_model",
    "capture_activations",
    "evaluate",
    "export_activations",
    "finetune_expert",
    "load_checkpoint",
    "materialize_split",
    "native_cam",
    "save_checkpoint",
    "split_dataset",
]
