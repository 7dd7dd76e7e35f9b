"""Regression metrics, dataset splitting, and a pixel-space k-NN baseline.

The baseline predictor mean-pools each RGB image to a small grid, flattens
it, and averages the labels of the k nearest training images in Euclidean
distance.  It is deterministic and dependency-free, so the image pipeline is
measurable end to end without any deep-learning stack.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .imaging import ManifestRecord, load_png, read_manifest

DEFAULT_SPLIT_RATIO = 0.70
DEFAULT_K = 5
DEFAULT_POOL_SIDE = 32


@dataclass(frozen=True)
class MetricsReport:
    """RMSE (mg/dL), MAPE (fraction), accuracy = 100 * (1 - MAPE), and n."""

    rmse: float
    mape: float
    accuracy_pct: float
    n: int

    def __post_init__(self) -> None:
        if self.rmse < 0 or self.mape < 0 or self.n < 1:
            raise ValueError("invalid metrics report")
        if self.accuracy_pct != 100.0 * (1.0 - self.mape):
            raise ValueError("accuracy_pct must equal 100 * (1 - mape)")

    @classmethod
    def from_predictions(cls, truths, predictions) -> "MetricsReport":
        y = np.asarray(truths, dtype=np.float64)
        frac = mape(y, predictions)
        return cls(
            rmse=rmse(y, predictions),
            mape=frac,
            accuracy_pct=100.0 * (1.0 - frac),
            n=int(y.size),
        )

    def to_json(self) -> str:
        return json.dumps(
            {
                "rmse": self.rmse,
                "mape": self.mape,
                "accuracy_pct": self.accuracy_pct,
                "n": self.n,
            }
        )

    @classmethod
    def from_json(cls, document: str) -> "MetricsReport":
        obj = json.loads(document)
        return cls(
            rmse=float(obj["rmse"]),
            mape=float(obj["mape"]),
            accuracy_pct=float(obj["accuracy_pct"]),
            n=int(obj["n"]),
        )


def _paired(truths, predictions) -> tuple[np.ndarray, np.ndarray]:
    y = np.asarray(truths, dtype=np.float64)
    p = np.asarray(predictions, dtype=np.float64)
    if y.size == 0 or y.shape != p.shape:
        raise ValueError("length mismatch")
    return y, p


def rmse(truths, predictions) -> float:
    """Root mean squared error, sqrt(mean((p - y)^2))."""
    y, p = _paired(truths, predictions)
    return float(np.sqrt(np.mean((p - y) ** 2)))


def mape(truths, predictions) -> float:
    """Mean absolute percentage error as a fraction (0.1235 = 12.35 %)."""
    y, p = _paired(truths, predictions)
    if (y <= 0).any():
        raise ValueError("nonpositive ground truth")
    return float(np.mean(np.abs(p - y) / y))


def split_train_val(
    records: Sequence,
    ratio: float = DEFAULT_SPLIT_RATIO,
    seed: int = 0,
) -> tuple[list, list]:
    """Deterministic shuffled partition: first floor(ratio * n) go to train.

    The split depends only on (seed, record order); train and validation are
    disjoint and together exhaust the input.
    """
    if len(records) < 2:
        raise ValueError("need at least 2 records to split")
    if not 0.0 <= ratio <= 1.0:
        raise ValueError("ratio must be in [0, 1]")
    perm = np.random.default_rng(seed).permutation(len(records))
    n_train = int(math.floor(ratio * len(records)))
    train = [records[i] for i in perm[:n_train]]
    val = [records[i] for i in perm[n_train:]]
    return train, val


def pool_image(pixels: np.ndarray, pool_side: int = DEFAULT_POOL_SIDE) -> np.ndarray:
    """Mean-pool an HxWx3 uint8 image to pool_side x pool_side x 3, flattened."""
    arr = np.asarray(pixels, dtype=np.float64)
    if arr.ndim != 3 or arr.shape[2] != 3:
        raise ValueError("expected an H x W x 3 image")
    pooled = np.empty((pool_side, pool_side, 3), dtype=np.float64)
    row_edges = np.linspace(0, arr.shape[0], pool_side + 1).astype(np.int64)
    col_edges = np.linspace(0, arr.shape[1], pool_side + 1).astype(np.int64)
    for i in range(pool_side):
        rows = arr[row_edges[i] : row_edges[i + 1]]
        for j in range(pool_side):
            pooled[i, j] = rows[:, col_edges[j] : col_edges[j + 1]].mean(axis=(0, 1))
    return pooled.reshape(-1)


def knn_predict(
    train: Sequence[tuple[np.ndarray, float]],
    query: np.ndarray,
    k: int = DEFAULT_K,
    pool_side: int = DEFAULT_POOL_SIDE,
) -> float:
    """Mean label of the k training images nearest to the query.

    ``train`` holds (pixels, label) pairs in manifest order; distance ties
    are broken in favor of earlier entries.
    """
    if not train:
        raise ValueError("empty training set")
    if k > len(train):
        raise ValueError("k exceeds training set size")
    features = np.stack([pool_image(p, pool_side) for p, _ in train])
    labels = np.asarray([label for _, label in train], dtype=np.float64)
    q = pool_image(query, pool_side)
    distances = np.sqrt(((features - q) ** 2).sum(axis=1))
    nearest = np.argsort(distances, kind="stable")[:k]
    return float(labels[nearest].mean())


def _pooled_dataset(
    records: Sequence[ManifestRecord], root: Path, pool_side: int
) -> np.ndarray:
    return np.stack(
        [pool_image(load_png(root / r.image_path), pool_side) for r in records]
    )


def evaluate(
    manifest_path,
    ratio: float = DEFAULT_SPLIT_RATIO,
    seed: int = 0,
    k: int = DEFAULT_K,
    pool_side: int = DEFAULT_POOL_SIDE,
) -> MetricsReport:
    """Split a manifest, k-NN predict every validation record, and report.

    Image paths are resolved relative to the manifest's directory; distance
    ties are broken by manifest order.
    """
    manifest_path = Path(manifest_path)
    records = read_manifest(manifest_path)
    train_idx, val_idx = split_train_val(range(len(records)), ratio=ratio, seed=seed)
    if not val_idx:
        raise ValueError("empty validation set")
    if k > len(train_idx):
        raise ValueError("k exceeds training set size")
    train_recs = [records[i] for i in sorted(train_idx)]
    val_recs = [records[i] for i in sorted(val_idx)]

    root = manifest_path.parent
    train_features = _pooled_dataset(train_recs, root, pool_side)
    train_labels = np.asarray([r.label for r in train_recs], dtype=np.float64)
    val_features = _pooled_dataset(val_recs, root, pool_side)

    predictions = np.empty(len(val_recs), dtype=np.float64)
    for i, q in enumerate(val_features):
        distances = np.sqrt(((train_features - q) ** 2).sum(axis=1))
        nearest = np.argsort(distances, kind="stable")[:k]
        predictions[i] = train_labels[nearest].mean()
    truths = np.asarray([r.label for r in val_recs], dtype=np.float64)
    return MetricsReport.from_predictions(truths, predictions)
