"""Session-file ingestion and deterministic synthetic session generation.

Channel files follow the wristband vendor's export convention: a text file
whose first line is the unix start timestamp, second line the sampling rate
in Hz, and every following line one sample.  Glucose files are CSV with
configurable timestamp/value column names (Dexcom-style defaults).
"""

from __future__ import annotations

import csv
import io
import logging
import math
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import IO, Iterable, Sequence

import numpy as np

from .signals import ChannelId, GlucoseReading, RawChannelSeries

log = logging.getLogger(__name__)

BVP_RATE_HZ = 64.0
SLOW_RATE_HZ = 4.0
READING_INTERVAL_S = 300.0
# The synthetic CGM clock runs 1 s behind the wearable session clock, as real
# monitor clocks are never aligned to the wearable's sample grid.  It also
# exercises the insufficient-history drop for the first reading.
CGM_CLOCK_LAG_S = 1.0

DEFAULT_TIMESTAMP_COLUMN = "Timestamp"
DEFAULT_GLUCOSE_COLUMN = "Glucose Value (mg/dL)"


@dataclass(frozen=True)
class SessionBundle:
    """All channels and glucose readings from one recording session."""

    temp: RawChannelSeries
    eda: RawChannelSeries
    bvp: RawChannelSeries
    glucose: tuple[GlucoseReading, ...]
    participant: str

    def __post_init__(self) -> None:
        expected = (
            (self.temp, ChannelId.TEMP),
            (self.eda, ChannelId.EDA),
            (self.bvp, ChannelId.BVP),
        )
        for series, channel in expected:
            if series.channel is not channel:
                raise ValueError(f"series in {channel.value} slot has channel "
                                 f"{series.channel.value}")


@dataclass(frozen=True)
class SynthConfig:
    """Parameters of the synthetic session generator.

    ``class_frequencies`` pairs a BVP sinusoid frequency (Hz) with the glucose
    value (mg/dL) reported while that class is active; classes alternate every
    5-minute block.
    """

    seed: int
    duration_s: float
    class_frequencies: tuple[tuple[float, float], ...]
    noise_amplitude: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(
            self,
            "class_frequencies",
            tuple((float(f), float(g)) for f, g in self.class_frequencies),
        )
        if self.duration_s < 600:
            raise ValueError("invalid config: duration_s must be >= 600")
        if not self.class_frequencies:
            raise ValueError("invalid config: class_frequencies is empty")
        for f, g in self.class_frequencies:
            if not 0 < f < 2:
                raise ValueError("invalid config: frequency must be in (0, 2) Hz")
            if g <= 0:
                raise ValueError("invalid config: glucose must be > 0")
        if not np.isfinite(self.noise_amplitude) or self.noise_amplitude < 0:
            raise ValueError("invalid config: noise_amplitude must be >= 0")


def _open_text(source) -> IO[str]:
    if isinstance(source, (str, Path)):
        return open(source, "r", encoding="utf-8")
    if isinstance(source, io.TextIOBase):
        return source
    return io.TextIOWrapper(source, encoding="utf-8")


def read_e4_channel(source, expected: ChannelId) -> RawChannelSeries:
    """Parse a vendor-format channel file: start line, rate line, samples.

    Accepts a path or an open byte/text stream.  The start timestamp must be
    an integral number of unix seconds and the rate a positive real.
    """
    stream = _open_text(source)
    lines = stream.read().splitlines()
    if len(lines) < 2:
        raise ValueError("malformed header")
    try:
        start_raw = float(lines[0].strip())
        rate = float(lines[1].strip())
    except ValueError:
        raise ValueError("malformed header") from None
    if not np.isfinite(start_raw) or start_raw != int(start_raw):
        raise ValueError("malformed header")
    if not np.isfinite(rate) or rate <= 0:
        raise ValueError("malformed header")

    body = lines[2:]
    while body and body[-1].strip() == "":
        body.pop()
    if not body:
        raise ValueError("empty channel")
    values = np.empty(len(body), dtype=np.float64)
    for i, line in enumerate(body):
        try:
            v = float(line.strip())
        except ValueError:
            v = math.nan
        if not math.isfinite(v):
            raise ValueError(f"invalid sample at line {i + 3}")
        values[i] = v
    return RawChannelSeries(expected, int(start_raw), rate, values)


def write_e4_channel(series: RawChannelSeries, path) -> None:
    """Inverse of :func:`read_e4_channel`; floats round-trip exactly."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{series.start_time}\n{series.rate!r}\n")
        fh.writelines(f"{v!r}\n" for v in series.values.tolist())


def read_cgm(
    source,
    timestamp_column: str = DEFAULT_TIMESTAMP_COLUMN,
    glucose_column: str = DEFAULT_GLUCOSE_COLUMN,
) -> tuple[GlucoseReading, ...]:
    """Parse a glucose CSV into readings sorted by timestamp.

    Rows with non-numeric glucose (sensor clip strings like "Low") are
    skipped; duplicate timestamps keep the first occurrence.  Naive ISO-8601
    timestamps are interpreted as UTC.
    """
    stream = _open_text(source)
    reader = csv.DictReader(stream)
    if reader.fieldnames is None or not {timestamp_column, glucose_column} <= set(
        reader.fieldnames
    ):
        raise ValueError("schema mismatch")

    readings: list[GlucoseReading] = []
    skipped = 0
    for row in reader:
        try:
            value = float(row[glucose_column])
        except (TypeError, ValueError):
            skipped += 1
            continue
        if not math.isfinite(value) or value <= 0:
            skipped += 1
            continue
        ts = datetime.fromisoformat(row[timestamp_column].strip())
        if ts.tzinfo is None:
            ts = ts.replace(tzinfo=timezone.utc)
        readings.append(GlucoseReading(ts.timestamp(), value))
    if skipped:
        log.warning("skipped %d unparseable glucose rows", skipped)
    if not readings:
        raise ValueError("no readings")

    readings.sort(key=lambda r: r.timestamp)
    deduped: list[GlucoseReading] = []
    duplicates = 0
    for r in readings:
        if deduped and r.timestamp == deduped[-1].timestamp:
            duplicates += 1
            continue
        deduped.append(r)
    if duplicates:
        log.warning("dropped %d duplicate glucose timestamps", duplicates)
    return tuple(deduped)


def write_cgm(readings: Iterable[GlucoseReading], path) -> None:
    """Write readings as a Dexcom-style CSV consumable by :func:`read_cgm`."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([DEFAULT_TIMESTAMP_COLUMN, DEFAULT_GLUCOSE_COLUMN])
        for r in readings:
            stamp = datetime.fromtimestamp(r.timestamp, tz=timezone.utc)
            writer.writerow([stamp.strftime("%Y-%m-%dT%H:%M:%S"), repr(r.value)])


DEFAULT_SESSION_START = 1600000000

# Fixed shapes of the non-cardiac synthetic channels.
_TEMP_BASE_C = 33.0
_TEMP_DRIFT_C_PER_S = 1e-4
_EDA_BASE_US = 0.5
_EDA_AMPLITUDE_US = 0.2
_EDA_PERIOD_S = 300.0


def synth_session(config: SynthConfig, participant: str | None = None) -> SessionBundle:
    """Generate a deterministic synthetic session for the given config.

    BVP is a unit sinusoid whose frequency follows the active class per
    5-minute block, plus uniform noise; TEMP drifts slowly from 33 C; EDA is
    a slow sinusoid.  Glucose readings arrive every 300 s (CGM clock lagging
    the session clock by 1 s) and report the active class value.
    """
    classes = config.class_frequencies
    n_blocks = math.ceil(config.duration_s / READING_INTERVAL_S)

    n_bvp = int(round(config.duration_s * BVP_RATE_HZ))
    t_bvp = np.arange(n_bvp, dtype=np.float64) / BVP_RATE_HZ
    block_of = np.minimum((t_bvp // READING_INTERVAL_S).astype(np.int64), n_blocks - 1)
    freqs = np.asarray([classes[b % len(classes)][0] for b in range(n_blocks)])
    block_start = block_of * READING_INTERVAL_S
    bvp = np.sin(2.0 * np.pi * freqs[block_of] * (t_bvp - block_start))
    rng = np.random.default_rng(config.seed)
    bvp = bvp + rng.uniform(-config.noise_amplitude, config.noise_amplitude, n_bvp)

    n_slow = int(round(config.duration_s * SLOW_RATE_HZ))
    t_slow = np.arange(n_slow, dtype=np.float64) / SLOW_RATE_HZ
    temp = _TEMP_BASE_C + _TEMP_DRIFT_C_PER_S * t_slow
    eda = _EDA_BASE_US + _EDA_AMPLITUDE_US * np.sin(
        2.0 * np.pi * t_slow / _EDA_PERIOD_S
    )

    readings = []
    k = 1
    while True:
        offset = k * READING_INTERVAL_S - CGM_CLOCK_LAG_S
        if offset > config.duration_s:
            break
        value = classes[(k - 1) % len(classes)][1]
        readings.append(GlucoseReading(DEFAULT_SESSION_START + offset, value))
        k += 1

    if participant is None:
        participant = f"synth-{config.seed}"
    start = DEFAULT_SESSION_START
    return SessionBundle(
        temp=RawChannelSeries(ChannelId.TEMP, start, SLOW_RATE_HZ, temp),
        eda=RawChannelSeries(ChannelId.EDA, start, SLOW_RATE_HZ, eda),
        bvp=RawChannelSeries(ChannelId.BVP, start, BVP_RATE_HZ, bvp),
        glucose=tuple(readings),
        participant=participant,
    )


SESSION_FILES = {
    ChannelId.TEMP: "TEMP.csv",
    ChannelId.EDA: "EDA.csv",
    ChannelId.BVP: "BVP.csv",
}
CGM_FILE = "glucose.csv"


def write_session(bundle: SessionBundle, directory) -> None:
    """Write a session as vendor-format channel files plus a glucose CSV."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    for series in (bundle.temp, bundle.eda, bundle.bvp):
        write_e4_channel(series, directory / SESSION_FILES[series.channel])
    write_cgm(bundle.glucose, directory / CGM_FILE)


def read_session(directory, participant: str | None = None) -> SessionBundle:
    """Read a session directory written by :func:`write_session`."""
    directory = Path(directory)
    missing = [
        name
        for name in (*SESSION_FILES.values(), CGM_FILE)
        if not (directory / name).exists()
    ]
    if missing:
        raise FileNotFoundError(
            f"session directory {directory} is missing: {', '.join(sorted(missing))}"
        )
    channels = {
        channel: read_e4_channel(directory / name, channel)
        for channel, name in SESSION_FILES.items()
    }
    return SessionBundle(
        temp=channels[ChannelId.TEMP],
        eda=channels[ChannelId.EDA],
        bvp=channels[ChannelId.BVP],
        glucose=read_cgm(directory / CGM_FILE),
        participant=participant if participant is not None else directory.name,
    )
