"""Recurrence-matrix constructions over time-domain and frequency-domain states.

Three modes are provided:

* unsigned: entry (m, n) is the Euclidean distance between embedded states
  s_m and s_n, giving the classic symmetric distance plot.
* temporal signed: the same distances, but each entry carries a sign derived
  from the angle between the state difference s_m - s_n and a fixed reference
  vector, which breaks the symmetry and preserves signal direction.
* phasic: the signed construction applied to 2-vector states built from the
  phases of the window's one-sided Fourier spectrum instead of raw samples.

All operations are pure; matrices for many windows may be computed
concurrently.  ``chunk_rows`` computes a matrix in row blocks with identical
arithmetic, so chunked and unchunked results are bit-identical.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .signals import PhaseSpaceEmbedding, embed

# A spectrum bin below this absolute magnitude has its phase defined as 0;
# atan2(0, 0) would otherwise be platform-dependent.
ZERO_MAGNITUDE_EPS = 1e-12

# Angle threshold of the sign test: cos(3*pi/4) = -sqrt(2)/2.  sqrt() is
# exactly rounded, so this spelling is the canonical constant.
SIGN_THRESHOLD = -math.sqrt(2.0) / 2.0


class RpMode(Enum):
    TEMPORAL_UNSIGNED = "temporal_unsigned"
    TEMPORAL_SIGNED = "temporal_signed"
    PHASIC = "phasic"


@dataclass(frozen=True)
class SignConfig:
    """Reference vector and cosine threshold of the sign test."""

    v: tuple[float, float] = (1.0, 1.0)
    threshold: float = SIGN_THRESHOLD

    def __post_init__(self) -> None:
        v0, v1 = float(self.v[0]), float(self.v[1])
        if not (np.isfinite(v0) and np.isfinite(v1)) or (v0 == 0.0 and v1 == 0.0):
            raise ValueError("reference vector must be nonzero")
        if not np.isfinite(self.threshold):
            raise ValueError("invalid threshold")


DEFAULT_SIGN_CONFIG = SignConfig()


@dataclass(frozen=True)
class Spectrum:
    """One-sided complex spectrum of a real series of length n."""

    bins: np.ndarray
    n: int

    def __post_init__(self) -> None:
        bins = np.asarray(self.bins, dtype=np.complex128)
        if bins.ndim != 1 or bins.size != self.n // 2 + 1:
            raise ValueError("spectrum length must be n//2 + 1")
        if not np.isfinite(bins).all():
            raise ValueError("invalid spectrum")
        bins.flags.writeable = False
        object.__setattr__(self, "bins", bins)

    def __len__(self) -> int:
        return int(self.bins.size)


@dataclass(frozen=True)
class RecurrenceMatrix:
    """Square signed-distance matrix for one channel and one mode."""

    mode: RpMode
    data: np.ndarray

    def __post_init__(self) -> None:
        data = np.asarray(self.data, dtype=np.float64)
        if data.ndim != 2 or data.shape[0] != data.shape[1] or data.shape[0] == 0:
            raise ValueError("matrix must be square and non-empty")
        if not np.isfinite(data).all():
            raise ValueError("invalid matrix")
        data.flags.writeable = False
        object.__setattr__(self, "data", data)

    @property
    def side(self) -> int:
        return int(self.data.shape[0])


def dft(x) -> Spectrum:
    """One-sided discrete Fourier transform of a real series.

    Bin k (0 <= k <= N/2) equals sum_n x[n] * exp(-2j*pi*k*n/N).  Computed
    with an FFT, which agrees with the defining summation to ~1e-15 relative.
    """
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1 or x.size < 2:
        raise ValueError("window too short")
    if not np.isfinite(x).all():
        raise ValueError("invalid sample")
    return Spectrum(np.fft.rfft(x), int(x.size))


def phase_sequence(spectrum: Spectrum) -> np.ndarray:
    """Per-bin phase angles in (-pi, pi]; near-zero bins get phase 0."""
    bins = spectrum.bins
    phases = np.arctan2(bins.imag, bins.real)
    phases[phases == -np.pi] = np.pi
    phases[np.abs(bins) < ZERO_MAGNITUDE_EPS] = 0.0
    return phases


def _pair_signs(dx: np.ndarray, dy: np.ndarray, cfg: SignConfig) -> np.ndarray:
    """Vectorized sign test on difference vectors (dx, dy).

    Returns -1 where the cosine between (dx, dy) and the reference vector is
    strictly below the threshold, +1 otherwise; zero-length differences get +1.
    sign_fn and the matrix builders share this routine so scalar and
    vectorized results are bit-identical.
    """
    v0, v1 = float(cfg.v[0]), float(cfg.v[1])
    norm_v = math.sqrt(v0 * v0 + v1 * v1)
    norm_d = np.sqrt(dx * dx + dy * dy)
    dot = dx * v0 + dy * v1
    with np.errstate(divide="ignore", invalid="ignore"):
        cosine = dot / (norm_d * norm_v)
    negative = (cosine < cfg.threshold) & (norm_d > 0.0)
    return np.where(negative, -1.0, 1.0)


def sign_fn(d, cfg: SignConfig = DEFAULT_SIGN_CONFIG) -> int:
    """Sign of a single difference vector: -1 or +1 (see :func:`_pair_signs`)."""
    dx = np.asarray(float(d[0]))
    dy = np.asarray(float(d[1]))
    return int(_pair_signs(dx, dy, cfg))


def _state_diffs(states: np.ndarray, rows: slice) -> tuple[np.ndarray, np.ndarray]:
    x, y = states[:, 0], states[:, 1]
    return x[rows, None] - x[None, :], y[rows, None] - y[None, :]


def _signed_matrix(
    states: np.ndarray, cfg: SignConfig, chunk_rows: int | None
) -> np.ndarray:
    w = states.shape[0]
    out = np.empty((w, w), dtype=np.float64)
    step = w if chunk_rows is None else max(1, int(chunk_rows))
    for lo in range(0, w, step):
        rows = slice(lo, min(lo + step, w))
        dx, dy = _state_diffs(states, rows)
        out[rows] = _pair_signs(dx, dy, cfg) * np.sqrt(dx * dx + dy * dy)
    return out


def unsigned_rp(embedding: PhaseSpaceEmbedding) -> RecurrenceMatrix:
    """Pairwise Euclidean distances between embedded states."""
    states = embedding.states
    dx, dy = _state_diffs(states, slice(None))
    return RecurrenceMatrix(RpMode.TEMPORAL_UNSIGNED, np.sqrt(dx * dx + dy * dy))


def temporal_rp(
    series,
    cfg: SignConfig = DEFAULT_SIGN_CONFIG,
    chunk_rows: int | None = None,
) -> RecurrenceMatrix:
    """Signed recurrence matrix over the time-domain embedding of a series."""
    states = embed(series).states
    return RecurrenceMatrix(RpMode.TEMPORAL_SIGNED, _signed_matrix(states, cfg, chunk_rows))


def phasic_rp(
    series,
    cfg: SignConfig = DEFAULT_SIGN_CONFIG,
    chunk_rows: int | None = None,
) -> RecurrenceMatrix:
    """Signed recurrence matrix over the spectrum-phase embedding of a series.

    The series is Fourier-transformed, per-bin phases are extracted, and the
    phase sequence (length N//2 + 1) is embedded into adjacent 2-vectors, so a
    length-N window yields an (N//2) x (N//2) matrix.
    """
    x = np.asarray(series, dtype=np.float64)
    if x.ndim != 1 or x.size < 4:
        raise ValueError("window too short")
    phases = phase_sequence(dft(x))
    states = embed(phases).states
    return RecurrenceMatrix(RpMode.PHASIC, _signed_matrix(states, cfg, chunk_rows))
