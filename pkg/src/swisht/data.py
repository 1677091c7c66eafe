"""Dataset ingestion: IDX-format image/label parsing (gzip-transparent),
deterministic stratified subsetting, and a seeded synthetic two-blob
generator for sanity training runs.
"""

from __future__ import annotations

import gzip
import struct
from dataclasses import dataclass

import numpy as np

IDX_IMAGE_MAGIC = 0x00000803
IDX_LABEL_MAGIC = 0x00000801
_GZIP_MAGIC = b"\x1f\x8b"


class IdxFormatError(ValueError):
    """Malformed IDX payload: wrong magic, truncation, or bad labels."""


@dataclass(frozen=True)
class Dataset:
    features: np.ndarray  # (n, d) float64
    labels: np.ndarray  # (n,) int64
    classes: int

    def __post_init__(self) -> None:
        if self.features.ndim != 2 or self.features.shape[0] < 1:
            raise ValueError(f"features must be a non-empty 2-D array, got {self.features.shape}")
        if self.labels.shape != (self.features.shape[0],):
            raise ValueError("labels must be one per feature row")
        if self.labels.size and (self.labels.min() < 0 or self.labels.max() >= self.classes):
            raise ValueError(f"labels must lie in [0, {self.classes})")

    @property
    def n(self) -> int:
        return self.features.shape[0]


def _maybe_gunzip(data: bytes) -> bytes:
    if data[:2] == _GZIP_MAGIC:
        return gzip.decompress(data)
    return data


def parse_idx_images(data: bytes) -> np.ndarray:
    """Parse an IDX image file into an (n, rows*cols) float64 array in [0, 1].

    Pixels are u8 scaled by 1/255; row i holds image i flattened
    row-major.  Accepts gzip-compressed payloads transparently.
    """
    data = _maybe_gunzip(data)
    if len(data) < 16:
        raise IdxFormatError(f"image header needs 16 bytes, got {len(data)}")
    magic, n, rows, cols = struct.unpack(">IIII", data[:16])
    if magic != IDX_IMAGE_MAGIC:
        raise IdxFormatError(
            f"wrong magic for images: got 0x{magic:08x}, expected 0x{IDX_IMAGE_MAGIC:08x}"
        )
    expected = 16 + n * rows * cols
    if len(data) != expected:
        raise IdxFormatError(
            f"truncated or oversized image payload: expected {expected} bytes, got {len(data)}"
        )
    if n == 0:
        raise IdxFormatError("empty dataset: image count is zero")
    pixels = np.frombuffer(data, dtype=np.uint8, count=n * rows * cols, offset=16)
    return pixels.reshape(n, rows * cols).astype(np.float64) / 255.0


def parse_idx_labels(data: bytes, classes: int = 10) -> np.ndarray:
    """Parse an IDX label file into an int64 array, validating the range."""
    data = _maybe_gunzip(data)
    if len(data) < 8:
        raise IdxFormatError(f"label header needs 8 bytes, got {len(data)}")
    magic, n = struct.unpack(">II", data[:8])
    if magic != IDX_LABEL_MAGIC:
        raise IdxFormatError(
            f"wrong magic for labels: got 0x{magic:08x}, expected 0x{IDX_LABEL_MAGIC:08x}"
        )
    if n == 0:
        raise IdxFormatError("empty dataset: label count is zero")
    expected = 8 + n
    if len(data) != expected:
        raise IdxFormatError(
            f"truncated or oversized label payload: expected {expected} bytes, got {len(data)}"
        )
    labels = np.frombuffer(data, dtype=np.uint8, count=n, offset=8).astype(np.int64)
    bad = labels >= classes
    if bad.any():
        i = int(np.argmax(bad))
        raise IdxFormatError(f"label {labels[i]} at index {i} exceeds classes={classes}")
    return labels


def write_idx_images(features: np.ndarray, rows: int, cols: int) -> bytes:
    """Serialize [0,1] features back to IDX bytes (u8 quantization)."""
    n = features.shape[0]
    pixels = np.rint(features * 255.0).astype(np.uint8)
    return struct.pack(">IIII", IDX_IMAGE_MAGIC, n, rows, cols) + pixels.tobytes()


def write_idx_labels(labels: np.ndarray) -> bytes:
    return struct.pack(">II", IDX_LABEL_MAGIC, len(labels)) + np.asarray(labels, dtype=np.uint8).tobytes()


def load_idx_file(path) -> bytes:
    with open(path, "rb") as fh:
        return fh.read()


def load_mnist(images_path, labels_path, classes: int = 10) -> Dataset:
    features = parse_idx_images(load_idx_file(images_path))
    labels = parse_idx_labels(load_idx_file(labels_path), classes=classes)
    if features.shape[0] != labels.shape[0]:
        raise IdxFormatError(
            f"image/label counts differ: {features.shape[0]} vs {labels.shape[0]}"
        )
    return Dataset(features=features, labels=labels, classes=classes)


def subset(ds: Dataset, n: int, seed: int) -> Dataset:
    """Seeded class-stratified sample of n rows.

    Per-class counts differ by at most one from n/classes; which classes
    receive the remainder is part of the seeded draw.  n == ds.n returns
    a seeded permutation of the full set.
    """
    if not 1 <= n <= ds.n:
        raise ValueError(f"subset size {n} outside [1, {ds.n}]")
    rng = np.random.default_rng(seed)
    if n == ds.n:
        order = rng.permutation(ds.n)
        return Dataset(ds.features[order], ds.labels[order], ds.classes)

    base, remainder = divmod(n, ds.classes)
    quotas = np.full(ds.classes, base, dtype=np.int64)
    quotas[rng.permutation(ds.classes)[:remainder]] += 1

    chosen: list[np.ndarray] = []
    for cls in range(ds.classes):
        pool = np.nonzero(ds.labels == cls)[0]
        if quotas[cls] > pool.size:
            raise ValueError(
                f"class {cls} has only {pool.size} rows, cannot draw {quotas[cls]}"
            )
        chosen.append(rng.permutation(pool)[: quotas[cls]])
    order = rng.permutation(np.concatenate(chosen))
    return Dataset(ds.features[order], ds.labels[order], ds.classes)


def synth_blobs(n_per_class: int, classes: int = 2, separation: float = 6.0, seed: int = 0) -> Dataset:
    """Unit-variance 2-D Gaussian blobs spaced `separation` apart on the x-axis."""
    if n_per_class < 1:
        raise ValueError("n_per_class must be >= 1")
    if separation < 0:
        raise ValueError("separation must be non-negative")
    rng = np.random.default_rng(seed)
    spread = (classes - 1) * separation / 2.0
    feats = []
    labels = []
    for cls in range(classes):
        center = np.array([cls * separation - spread, 0.0])
        feats.append(rng.normal(0.0, 1.0, size=(n_per_class, 2)) + center)
        labels.append(np.full(n_per_class, cls, dtype=np.int64))
    order = rng.permutation(classes * n_per_class)
    return Dataset(np.concatenate(feats)[order], np.concatenate(labels)[order], classes)
