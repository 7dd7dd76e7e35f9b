"""Core domain types for wearable channel data and the phase-space embedding.

All types are immutable after construction and reject non-finite values,
so instances can be shared freely between concurrent workers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

# Samples per labeled window: 5 minutes at 4 Hz.
WINDOW_SAMPLES = 1200
WINDOW_SECONDS = 300.0
TARGET_RATE_HZ = 4.0


class ChannelId(Enum):
    """Sensor channels, in fixed RGB order: TEMP -> R, EDA -> G, BVP -> B."""

    TEMP = "TEMP"
    EDA = "EDA"
    BVP = "BVP"

    @property
    def rgb_index(self) -> int:
        return _RGB_ORDER.index(self)


_RGB_ORDER = (ChannelId.TEMP, ChannelId.EDA, ChannelId.BVP)


def _as_readonly(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class RawChannelSeries:
    """One sensor channel: start time, sampling rate, and sample values.

    Sample k is implicitly timestamped ``start_time + k / rate``.  Values must
    be finite; NaN entries are accepted only with ``allow_gaps=True``, where
    they mark dropout samples awaiting :func:`phasicrp.preprocessing.fill_gaps`.
    """

    channel: ChannelId
    start_time: int
    rate: float
    values: np.ndarray
    allow_gaps: bool = field(default=False, compare=False)

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim != 1 or values.size == 0:
            raise ValueError("empty channel")
        if not np.isfinite(self.rate) or self.rate <= 0:
            raise ValueError("invalid rate")
        if np.isinf(values).any():
            raise ValueError("invalid sample")
        if not self.allow_gaps and np.isnan(values).any():
            raise ValueError("invalid sample")
        object.__setattr__(self, "values", _as_readonly(values))

    @property
    def n_samples(self) -> int:
        return int(self.values.size)

    @property
    def duration_s(self) -> float:
        return self.n_samples / self.rate

    def sample_time(self, k: int) -> float:
        return self.start_time + k / self.rate


@dataclass(frozen=True, order=True)
class GlucoseReading:
    """A glucose measurement in mg/dL at a unix-second timestamp."""

    timestamp: float
    value: float

    def __post_init__(self) -> None:
        if not np.isfinite(self.timestamp):
            raise ValueError("invalid timestamp")
        if not np.isfinite(self.value) or self.value <= 0:
            raise ValueError("nonpositive glucose value")


@dataclass(frozen=True)
class LabeledWindow:
    """A 1200x3 aligned biometric window (TEMP, EDA, BVP) plus its label."""

    end_time: float
    samples: np.ndarray
    label: float
    participant: str

    def __post_init__(self) -> None:
        samples = np.asarray(self.samples, dtype=np.float64)
        if samples.shape != (WINDOW_SAMPLES, 3):
            raise ValueError(
                f"window must be {WINDOW_SAMPLES}x3, got {samples.shape}"
            )
        if not np.isfinite(samples).all():
            raise ValueError("invalid sample")
        if not np.isfinite(self.label) or self.label <= 0:
            raise ValueError("nonpositive glucose value")
        object.__setattr__(self, "samples", _as_readonly(samples))

    def channel(self, which: ChannelId) -> np.ndarray:
        return self.samples[:, which.rgb_index]


@dataclass(frozen=True)
class PhaseSpaceEmbedding:
    """Sequence of 2-vector states (x_j, x_{j+1}), one per adjacent pair."""

    states: np.ndarray

    def __post_init__(self) -> None:
        states = np.asarray(self.states, dtype=np.float64)
        if states.ndim != 2 or states.shape[1] != 2 or states.shape[0] == 0:
            raise ValueError("states must be a non-empty (n, 2) array")
        if not np.isfinite(states).all():
            raise ValueError("invalid sample")
        object.__setattr__(self, "states", _as_readonly(states))

    def __len__(self) -> int:
        return int(self.states.shape[0])


def embed(series) -> PhaseSpaceEmbedding:
    """Embed a scalar series into 2-vector states (x_j, x_{j+1}).

    Args:
        series: real sequence of length N >= 2.

    Returns:
        PhaseSpaceEmbedding with N-1 states; state j is (series[j], series[j+1]).
    """
    x = np.asarray(series, dtype=np.float64)
    if x.ndim != 1 or x.size < 2:
        raise ValueError("window too short")
    if not np.isfinite(x).all():
        raise ValueError("invalid sample")
    return PhaseSpaceEmbedding(np.stack([x[:-1], x[1:]], axis=1))
