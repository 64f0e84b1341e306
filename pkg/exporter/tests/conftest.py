import sys
from pathlib import Path

import numpy as np
import pytest
from PIL import Image


def write_random_png(path: Path, seed: int, size=(224, 224)) -> Path:
    rng = np.random.default_rng(seed)
    data = rng.integers(0, 256, (size[1], size[0], 3)).astype(np.uint8)
    path.parent.mkdir(parents=True, exist_ok=True)
    Image.fromarray(data, mode="RGB").save(path)
    return path


@pytest.fixture(scope="session")
def toy_image(tmp_path_factory) -> Path:
    return write_random_png(tmp_path_factory.mktemp("img") / "sample.png", seed=1)


@pytest.fixture(scope="session")
def toy_dataset(tmp_path_factory) -> dict[str, Path]:
    """Two-class train/val directories, two images per class."""
    root = tmp_path_factory.mktemp("toyset")
    seed = 10
    for split in ("train", "val"):
        for label in ("in_class", "out_of_class"):
            for index in range(2):
                write_random_png(root / split / label / f"{index}.png", seed, size=(96, 96))
                seed += 1
    return {"train": root / "train", "val": root / "val"}


def pytest_runtest_logreport(report):
    if report.when != "call" or "test_acceptance" not in report.nodeid:
        return
    status = "PASS" if report.passed else "FAIL"
    name = report.nodeid.split("::")[-1]
    sys.stdout.write(f"\nACCEPTANCE {status}: {name}\n")
