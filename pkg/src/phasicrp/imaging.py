"""Quantize recurrence matrices to 8-bit channels and persist RGB images.

Each matrix is min-max normalized independently (per image, per channel),
quantized with round-half-up, and the three channels are stacked in the
fixed order R=TEMP, G=EDA, B=BVP.  Images are written as lossless 8-bit RGB
PNG; a line-delimited JSON manifest maps every image to its glucose label.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
from PIL import Image

from .recurrence import RecurrenceMatrix, RpMode


@dataclass(frozen=True)
class RgbImage:
    """Square W x W x 3 8-bit image; channel order R=TEMP, G=EDA, B=BVP."""

    pixels: np.ndarray

    def __post_init__(self) -> None:
        pixels = np.asarray(self.pixels)
        if pixels.dtype != np.uint8:
            raise ValueError("pixels must be uint8")
        if pixels.ndim != 3 or pixels.shape[2] != 3 or pixels.shape[0] != pixels.shape[1]:
            raise ValueError("pixels must be square W x W x 3")
        pixels.flags.writeable = False
        object.__setattr__(self, "pixels", pixels)

    @property
    def width(self) -> int:
        return int(self.pixels.shape[1])

    @property
    def height(self) -> int:
        return int(self.pixels.shape[0])


@dataclass(frozen=True)
class ManifestRecord:
    """One emitted image: relative path, label, and provenance."""

    image_path: str
    label: float
    end_time: float
    participant: str
    mode: RpMode

    def __post_init__(self) -> None:
        if self.label <= 0:
            raise ValueError("nonpositive glucose value")


def normalize_quantize(matrix: RecurrenceMatrix) -> np.ndarray:
    """Min-max normalize a matrix and quantize to uint8.

    q = floor(255 * (x - lo) / (hi - lo) + 0.5); a constant matrix maps to
    all zeros (no recurrence structure, least-signal value).
    """
    data = matrix.data
    lo = data.min()
    hi = data.max()
    if hi == lo:
        return np.zeros(data.shape, dtype=np.uint8)
    return np.floor(255.0 * (data - lo) / (hi - lo) + 0.5).astype(np.uint8)


def merge_rgb(
    temp_m: RecurrenceMatrix,
    eda_m: RecurrenceMatrix,
    bvp_m: RecurrenceMatrix,
) -> RgbImage:
    """Quantize three same-mode, same-size matrices and stack them as RGB."""
    matrices = (temp_m, eda_m, bvp_m)
    if len({m.mode for m in matrices}) != 1 or len({m.side for m in matrices}) != 1:
        raise ValueError("channel mismatch")
    return RgbImage(np.stack([normalize_quantize(m) for m in matrices], axis=2))


def emit_png(image: RgbImage, path) -> None:
    """Write an 8-bit RGB PNG (no alpha); decoding reproduces pixels exactly."""
    path = Path(path)
    try:
        Image.fromarray(np.asarray(image.pixels), mode="RGB").save(path, format="PNG")
    except OSError as exc:
        raise OSError(f"cannot write image {path}: {exc}") from exc


def load_png(path) -> np.ndarray:
    """Read a PNG written by :func:`emit_png` back into a uint8 array."""
    path = Path(path)
    try:
        with Image.open(path) as img:
            return np.asarray(img.convert("RGB"), dtype=np.uint8)
    except OSError as exc:
        raise OSError(f"cannot read image {path}: {exc}") from exc


_MANIFEST_FIELDS = ("image_path", "label", "end_time", "participant", "mode")


def write_manifest(records: Sequence[ManifestRecord], path) -> None:
    """Write one JSON object per record, fields in fixed order, UTF-8."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for r in records:
            obj = {
                "image_path": r.image_path,
                "label": r.label,
                "end_time": r.end_time,
                "participant": r.participant,
                "mode": r.mode.value,
            }
            fh.write(json.dumps(obj) + "\n")


def read_manifest(path) -> list[ManifestRecord]:
    """Parse a manifest written by :func:`write_manifest`."""
    records = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            obj = json.loads(line)
            records.append(
                ManifestRecord(
                    image_path=obj["image_path"],
                    label=float(obj["label"]),
                    end_time=float(obj["end_time"]),
                    participant=str(obj["participant"]),
                    mode=RpMode(obj["mode"]),
                )
            )
    return records
