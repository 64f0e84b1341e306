"""Fine-tune a binary expert classifier.

The recipe: take a ResNet (ideally ImageNet-pretrained), replace the
final fully connected layer with a 2-way head, and train with SGD at
learning rate 0.001 and momentum 0.9 for 30 epochs, keeping the
checkpoint with the best validation accuracy.
"""

from __future__ import annotations

from pathlib import Path

import torch
from torch.utils.data import DataLoader
from torchvision.datasets import ImageFolder

from .models import TRAIN_TRANSFORM, build_model, save_checkpoint

DEFAULT_EPOCHS = 30
DEFAULT_LR = 0.001
DEFAULT_MOMENTUM = 0.9


def _labeled_dataset(root) -> ImageFolder:
    root = Path(root)
    dataset = ImageFolder(str(root), transform=TRAIN_TRANSFORM)
    counts = {name: 0 for name in dataset.classes}
    for _, label in dataset.samples:
        counts[dataset.classes[label]] += 1
    empty = [name for name, count in counts.items() if count == 0]
    if empty:
        raise ValueError(f"{root}: empty class directories {empty}")
    return dataset


def finetune_expert(
    train_dir,
    val_dir,
    out_path,
    model_name: str = "resnet152",
    epochs: int = DEFAULT_EPOCHS,
    lr: float = DEFAULT_LR,
    momentum: float = DEFAULT_MOMENTUM,
    batch_size: int = 16,
    pretrained: bool = False,
    seed: int = 0,
    device: str = "cpu",
) -> dict:
    """Train a binary expert and keep the best-validation checkpoint.

    Returns a summary dict with the best epoch and accuracy. The training
    directories must hold exactly two class subdirectories (in-class and
    out-of-class), each non-empty.
    """
    train_ds = _labeled_dataset(train_dir)
    val_ds = _labeled_dataset(val_dir)
    if len(train_ds.classes) != 2:
        raise ValueError(
            f"binary expert needs exactly 2 classes, found {train_ds.classes} in {train_dir}"
        )
    if val_ds.classes != train_ds.classes:
        raise ValueError(
            f"class mismatch: train has {train_ds.classes}, val has {val_ds.classes}"
        )

    torch.manual_seed(seed)
    generator = torch.Generator().manual_seed(seed)
    train_loader = DataLoader(train_ds, batch_size=batch_size, shuffle=True, generator=generator)
    val_loader = DataLoader(val_ds, batch_size=batch_size, shuffle=False)

    model = build_model(model_name, num_classes=2, pretrained=pretrained, seed=seed)
    model.to(device)
    criterion = torch.nn.CrossEntropyLoss()
    optimizer = torch.optim.SGD(model.parameters(), lr=lr, momentum=momentum)

    out_path = Path(out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    best = {"val_accuracy": -1.0, "epoch": None}
    for epoch in range(1, epochs + 1):
        model.train()
        for batch, labels in train_loader:
            batch, labels = batch.to(device), labels.to(device)
            optimizer.zero_grad()
            loss = criterion(model(batch), labels)
            loss.backward()
            optimizer.step()

        accuracy = evaluate(model, val_loader, device)
        if accuracy > best["val_accuracy"]:
            best = {"val_accuracy": accuracy, "epoch": epoch}
            model.eval()
            save_checkpoint(
                model, model_name, train_ds.classes, out_path,
                val_accuracy=accuracy, epoch=epoch,
            )
    return {"checkpoint": out_path, "classes": train_ds.classes, **best}


def evaluate(model, loader, device: str = "cpu") -> float:
    """Plain accuracy over a loader."""
    model.eval()
    correct = 0
    total = 0
    with torch.no_grad():
        for batch, labels in loader:
            predictions = model(batch.to(device)).argmax(dim=1).cpu()
            correct += int((predictions == labels).sum())
            total += len(labels)
    return correct / total if total else 0.0
