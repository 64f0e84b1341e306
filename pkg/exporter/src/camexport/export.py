"""Capture activations and classifier weights as interchange files.

A forward hook on the last convolutional stage stores the activation
stack produced during inference; the classifier head's weight rows come
straight from the model. Everything is written as NPY v1.0 float32 files
(via ``numpy.save``), the format the localization core reads.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
import torch
from PIL import Image

from .models import PREPROCESS, build_model, load_checkpoint

ACTIVATION_STAGE = "layer4"


@dataclass(frozen=True)
class ExportRecord:
    """Paths and metadata of one export run."""

    activations: Path
    weights: Path
    class_weights: dict[int, Path]
    predicted_class: int
    model_id: str
    image: Path
    manifest: Path


def capture_activations(model: torch.nn.Module, batch: torch.Tensor) -> tuple[torch.Tensor, torch.Tensor]:
    """Run one forward pass and return (activation stack, logits).

    The stack is the (C, H, W) output of the last convolutional stage for
    the first batch element, taken after its final ReLU, i.e. exactly
    what the global average pool consumes.
    """
    captured: list[torch.Tensor] = []
    stage = getattr(model, ACTIVATION_STAGE)
    handle = stage.register_forward_hook(lambda module, args, output: captured.append(output.detach()))
    try:
        with torch.no_grad():
            logits = model(batch)
    finally:
        handle.remove()
    return captured[0][0], logits


def native_cam(activations: np.ndarray, weight_row: np.ndarray) -> np.ndarray:
    """Weighted activation sum computed on the exporter side.

    Used as the cross-tool consistency reference: the localization core
    must reproduce this map from the exported files.
    """
    stack = torch.from_numpy(np.asarray(activations, dtype=np.float32))
    weights = torch.from_numpy(np.asarray(weight_row, dtype=np.float32))
    return torch.einsum("c,chw->hw", weights, stack).numpy()


def export_activations(
    image_path,
    out_dir,
    model_name: str = "resnet152",
    checkpoint=None,
    pretrained: bool = False,
    model_id: str | None = None,
) -> ExportRecord:
    """Export the activation stack and class weight rows for one image.

    Writes ``<stem>_acts.npy`` (C, H, W), ``<stem>_weights.npy`` (the
    predicted class's row), one ``<stem>_weights_class<K>.npy`` per
    output class, and a ``<stem>_export.txt`` manifest. With a
    ``checkpoint`` the run is fully reproducible: the same image exports
    to bit-identical files.
    """
    image_path = Path(image_path)
    out_dir = Path(out_dir)
    if checkpoint is not None:
        model, meta = load_checkpoint(checkpoint)
        model_name = meta["model_name"]
    else:
        model = build_model(model_name, pretrained=pretrained)
    model_id = model_id if model_id is not None else model_name

    with Image.open(image_path) as img:
        batch = PREPROCESS(img.convert("RGB")).unsqueeze(0)
    stack, logits = capture_activations(model, batch)
    predicted = int(logits[0].argmax())
    weight_matrix = model.fc.weight.detach().cpu().numpy().astype(np.float32)

    out_dir.mkdir(parents=True, exist_ok=True)
    stem = image_path.stem
    acts_path = out_dir / f"{stem}_acts.npy"
    np.save(acts_path, stack.cpu().numpy().astype(np.float32))
    weights_path = out_dir / f"{stem}_weights.npy"
    np.save(weights_path, weight_matrix[predicted])
    class_paths = {}
    for index in range(weight_matrix.shape[0]):
        row_path = out_dir / f"{stem}_weights_class{index}.npy"
        np.save(row_path, weight_matrix[index])
        class_paths[index] = row_path

    manifest_path = out_dir / f"{stem}_export.txt"
    lines = {
        "image": image_path,
        "model": model_id,
        "architecture": model_name,
        "predicted_class": predicted,
        "activations": acts_path,
        "weights": weights_path,
    }
    for index, row_path in class_paths.items():
        lines[f"weights_class{index}"] = row_path
    manifest_path.write_text(
        "".join(f"{key}={value}\n" for key, value in lines.items()), encoding="utf-8"
    )

    return ExportRecord(
        activations=acts_path,
        weights=weights_path,
        class_weights=class_paths,
        predicted_class=predicted,
        model_id=model_id,
        image=image_path,
        manifest=manifest_path,
    )
