"""Resample BVP to 4 Hz, repair short dropouts, and cut labeled windows.

Each glucose reading at time t is paired with the five minutes of tri-channel
data immediately preceding it, [t - 300 s, t), so a prediction never sees
samples from after its measurement.  Windows that any channel fails to cover,
or that contain an unfilled dropout, are dropped.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from .signals import (
    TARGET_RATE_HZ,
    WINDOW_SAMPLES,
    WINDOW_SECONDS,
    ChannelId,
    GlucoseReading,
    LabeledWindow,
    RawChannelSeries,
)

_DECIMATION = 16  # 64 Hz -> 4 Hz
_GRID_EPS = 1e-9  # tolerance when mapping times onto the sample grid


def resample_to_4hz(series: RawChannelSeries) -> RawChannelSeries:
    """Decimate a 64 Hz series to 4 Hz by non-overlapping block means.

    Output sample k is the mean of input samples [16k, 16k+16); a trailing
    remainder shorter than one block is dropped.  TEMP and EDA are already at
    4 Hz and must not be passed here.
    """
    if series.rate != 64.0:
        raise ValueError("unexpected rate")
    n_blocks = series.n_samples // _DECIMATION
    if n_blocks == 0:
        raise ValueError("empty channel")
    blocks = series.values[: n_blocks * _DECIMATION].reshape(n_blocks, _DECIMATION)
    return RawChannelSeries(
        series.channel,
        series.start_time,
        TARGET_RATE_HZ,
        blocks.mean(axis=1),
        allow_gaps=series.allow_gaps,
    )


def fill_gaps(series: RawChannelSeries, max_gap_s: float = 1.0) -> RawChannelSeries:
    """Linearly interpolate NaN dropout runs no longer than ``max_gap_s``.

    Longer runs (and runs touching either end of the series) are left in
    place as session breaks; windows spanning them are dropped by
    :func:`align_windows`.
    """
    values = series.values
    nan_mask = np.isnan(values)
    if not nan_mask.any():
        return series

    out = values.copy()
    max_run = int(math.floor(max_gap_s * series.rate + _GRID_EPS))
    padded = np.concatenate(([False], nan_mask, [False]))
    edges = np.diff(padded.astype(np.int8))
    run_starts = np.flatnonzero(edges == 1)
    run_ends = np.flatnonzero(edges == -1)  # exclusive
    for start, end in zip(run_starts, run_ends):
        if start == 0 or end == values.size or end - start > max_run:
            continue  # break stays in place
        out[start:end] = np.interp(
            np.arange(start, end), [start - 1, end], [values[start - 1], values[end]]
        )
    still_gapped = bool(np.isnan(out).any())
    return RawChannelSeries(
        series.channel, series.start_time, series.rate, out, allow_gaps=still_gapped
    )


def _window_slice(series: RawChannelSeries, end_time: float) -> np.ndarray | None:
    """1200-sample slice covering [end_time - 300, end_time), or None."""
    rel = (end_time - WINDOW_SECONDS - series.start_time) * series.rate
    k0 = math.ceil(rel - _GRID_EPS)
    if k0 < 0 or k0 + WINDOW_SAMPLES > series.n_samples:
        return None
    if series.start_time + (k0 + WINDOW_SAMPLES - 1) / series.rate >= end_time:
        return None
    window = series.values[k0 : k0 + WINDOW_SAMPLES]
    if np.isnan(window).any():
        return None
    return window


def align_windows(
    temp: RawChannelSeries,
    eda: RawChannelSeries,
    bvp4: RawChannelSeries,
    glucose: Sequence[GlucoseReading],
    participant: str = "",
) -> list[LabeledWindow]:
    """Cut one labeled 1200x3 window per glucose reading with full coverage.

    Readings whose preceding five minutes are not fully covered by all three
    channels (or that span an unfilled dropout) are dropped; the drop count is
    ``len(glucose) - len(result)``.  Output is ordered by reading timestamp,
    regardless of input order.
    """
    channels = {
        ChannelId.TEMP: temp,
        ChannelId.EDA: eda,
        ChannelId.BVP: bvp4,
    }
    for channel, series in channels.items():
        if series.channel is not channel:
            raise ValueError(f"series in {channel.value} slot has channel "
                             f"{series.channel.value}")
        if series.rate != TARGET_RATE_HZ:
            raise ValueError("unexpected rate")

    windows: list[LabeledWindow] = []
    for reading in sorted(glucose, key=lambda r: r.timestamp):
        slices = [
            _window_slice(channels[c], reading.timestamp)
            for c in (ChannelId.TEMP, ChannelId.EDA, ChannelId.BVP)
        ]
        if any(s is None for s in slices):
            continue
        windows.append(
            LabeledWindow(
                end_time=reading.timestamp,
                samples=np.stack(slices, axis=1),
                label=reading.value,
                participant=participant,
            )
        )
    return windows
