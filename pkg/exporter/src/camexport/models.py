"""ResNet-family expert models: construction, checkpoints, preprocessing.

Experts are torchvision ResNets whose final fully connected layer is
replaced with an N-way head (2 for a binary expert). The activation maps
feeding the global average pool are the output of the last convolutional
stage (``layer4``), which is where the export hook attaches.
"""

from __future__ import annotations

import torch
import torchvision.models as tv_models
from torchvision import transforms

RESNET_BUILDERS = {
    "resnet18": tv_models.resnet18,
    "resnet34": tv_models.resnet34,
    "resnet50": tv_models.resnet50,
    "resnet101": tv_models.resnet101,
    "resnet152": tv_models.resnet152,
}

# Standard ImageNet preprocessing used by the pretrained torchvision
# ResNets; activation values depend on it, so it is fixed here.
IMAGENET_MEAN = (0.485, 0.456, 0.406)
IMAGENET_STD = (0.229, 0.224, 0.225)

PREPROCESS = transforms.Compose(
    [
        transforms.Resize(256),
        transforms.CenterCrop(224),
        transforms.ToTensor(),
        transforms.Normalize(IMAGENET_MEAN, IMAGENET_STD),
    ]
)

TRAIN_TRANSFORM = transforms.Compose(
    [
        transforms.Resize(256),
        transforms.CenterCrop(224),
        transforms.ToTensor(),
        transforms.Normalize(IMAGENET_MEAN, IMAGENET_STD),
    ]
)


def build_model(
    model_name: str = "resnet152",
    num_classes: int | None = None,
    pretrained: bool = False,
    seed: int = 0,
) -> torch.nn.Module:
    """Construct a ResNet, optionally with a replaced classifier head.

    Without ``pretrained`` the model is randomly initialized from a fixed
    seed so repeated constructions are identical. ``pretrained=True``
    downloads the torchvision ImageNet weights, which requires network
    access.
    """
    if model_name not in RESNET_BUILDERS:
        raise ValueError(
            f"unsupported model {model_name!r}; choose one of {sorted(RESNET_BUILDERS)}"
        )
    if not pretrained:
        torch.manual_seed(seed)
    weights = "IMAGENET1K_V1" if pretrained else None
    model = RESNET_BUILDERS[model_name](weights=weights)
    if num_classes is not None:
        model.fc = torch.nn.Linear(model.fc.in_features, num_classes)
    model.eval()
    return model


def save_checkpoint(model, model_name, classes, path, val_accuracy=None, epoch=None) -> None:
    torch.save(
        {
            "model_name": model_name,
            "num_classes": len(classes),
            "classes": list(classes),
            "state_dict": model.state_dict(),
            "val_accuracy": val_accuracy,
            "epoch": epoch,
        },
        str(path),
    )


def load_checkpoint(path) -> tuple[torch.nn.Module, dict]:
    """Rebuild the model a checkpoint was saved from.

    Returns the model in eval mode plus the checkpoint metadata.
    """
    payload = torch.load(str(path), map_location="cpu", weights_only=True)
    required = {"model_name", "num_classes", "state_dict"}
    if not isinstance(payload, dict) or not required.issubset(payload):
        raise ValueError(f"{path}: not a camexport checkpoint (needs keys {sorted(required)})")
    model = build_model(payload["model_name"], num_classes=payload["num_classes"])
    model.load_state_dict(payload["state_dict"])
    model.eval()
    return model, payload
