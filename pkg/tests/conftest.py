import sys
from pathlib import Path

import numpy as np
import pytest

DATA_DIR = Path(__file__).resolve().parent / "data"


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA_DIR


@pytest.fixture()
def rng() -> np.random.Generator:
    return np.random.default_rng(20240817)


def random_positive_map(rng, height, width, dtype=np.float64):
    """Random map with values in [0, 1) and a guaranteed positive maximum."""
    data = rng.random((height, width))
    data.flat[int(rng.integers(data.size))] += 0.5
    return data.astype(dtype)


def pytest_runtest_logreport(report):
    # One visible pass/fail line per acceptance criterion.
    if report.when != "call" or "test_acceptance" not in report.nodeid:
        return
    status = "PASS" if report.passed else "FAIL"
    name = report.nodeid.split("::")[-1]
    sys.stdout.write(f"\nACCEPTANCE {status}: {name}\n")
