"""Deterministic train/val/test partitioning of a labeled image set."""

from __future__ import annotations

import random
import shutil
from pathlib import Path

SPLIT_NAMES = ("train", "val", "test")


def split_dataset(src_dir, ratios=(0.6, 0.2, 0.2), seed: int = 0) -> dict[str, list[Path]]:
    """Partition the files under ``src_dir`` into train/val/test.

    ``src_dir`` either holds one subdirectory per class (each class is
    split separately, preserving label balance) or a flat set of files.
    Ratios must sum to 1. The same seed always produces the same
    partition, and every file lands in exactly one split.
    """
    if len(ratios) != len(SPLIT_NAMES):
        raise ValueError(f"need {len(SPLIT_NAMES)} ratios, got {len(ratios)}")
    if abs(sum(ratios) - 1.0) > 1e-9:
        raise ValueError(f"ratios must sum to 1, got {tuple(ratios)} (sum {sum(ratios)})")

    src_dir = Path(src_dir)
    class_dirs = sorted(d for d in src_dir.iterdir() if d.is_dir())
    pools = class_dirs if class_dirs else [src_dir]

    rng = random.Random(seed)
    result: dict[str, list[Path]] = {name: [] for name in SPLIT_NAMES}
    for pool in pools:
        files = sorted(p for p in pool.iterdir() if p.is_file())
        rng.shuffle(files)
        for name, chunk in zip(SPLIT_NAMES, _cut(files, ratios)):
            result[name].extend(chunk)
    return result


def _cut(items: list, ratios) -> list[list]:
    """Split a list at cumulative-ratio boundaries, covering every item."""
    total = len(items)
    boundaries = []
    running = 0.0
    for ratio in ratios[:-1]:
        running += ratio
        boundaries.append(int(total * running + 0.5))
    boundaries = [0] + boundaries + [total]
    return [items[a:b] for a, b in zip(boundaries, boundaries[1:])]


def materialize_split(split: dict[str, list[Path]], src_dir, out_dir) -> dict[str, Path]:
    """Copy a partition into out_dir/{train,val,test}/, keeping each
    file's class subdirectory, and write one listing file per split."""
    src_dir = Path(src_dir)
    out_dir = Path(out_dir)
    listings = {}
    for name in SPLIT_NAMES:
        split_root = out_dir / name
        lines = []
        for path in split[name]:
            relative = path.relative_to(src_dir)
            destination = split_root / relative
            destination.parent.mkdir(parents=True, exist_ok=True)
            shutil.copy2(path, destination)
            lines.append(str(relative))
        listing = out_dir / f"{name}.txt"
        listing.write_text("".join(line + "\n" for line in lines), encoding="utf-8")
        listings[name] = listing
    return listings
