import os
from pathlib import Path

import numpy as np
import pytest

import swisht

GRID_401 = np.linspace(-10.0, 10.0, 401)

_MNIST_NAMES = {
    "train_images": "train-images-idx3-ubyte",
    "train_labels": "train-labels-idx1-ubyte",
    "test_images": "t10k-images-idx3-ubyte",
    "test_labels": "t10k-labels-idx1-ubyte",
}


def find_mnist() -> dict[str, Path] | None:
    """Locate the four MNIST IDX files (optionally gzipped) under $MNIST_DIR."""
    root = os.environ.get("MNIST_DIR")
    if not root:
        return None
    root = Path(root)
    paths = {}
    for key, name in _MNIST_NAMES.items():
        for candidate in (root / name, root / (name + ".gz")):
            if candidate.exists():
                paths[key] = candidate
                break
        else:
            return None
    return paths


@pytest.fixture(scope="session")
def mnist_paths():
    paths = find_mnist()
    if paths is None:
        pytest.skip(
            "MNIST IDX files not available (no network access in this environment); "
            "set MNIST_DIR to a directory holding the four standard files to enable"
        )
    return paths


@pytest.fixture(params=swisht.available_backends())
def backend(request):
    with swisht.use_backend(request.param):
        yield request.param


@pytest.fixture
def x_grid():
    return GRID_401.copy()
