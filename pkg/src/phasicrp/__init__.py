"""Recurrence-plot RGB image encoding for wearable biosignals.

Converts aligned TEMP/EDA/BVP windows into signed recurrence-plot images,
either over the raw samples (temporal mode) or over the phases of the
window's Fourier spectrum (phasic mode), and evaluates how much glucose
signal the images carry with a deterministic k-NN baseline.
"""

from .signals import (
    TARGET_RATE_HZ,
    WINDOW_SAMPLES,
    WINDOW_SECONDS,
    ChannelId,
    GlucoseReading,
    LabeledWindow,
    PhaseSpaceEmbedding,
    RawChannelSeries,
    embed,
)
from .ingestion import (
    SessionBundle,
    SynthConfig,
    read_cgm,
    read_e4_channel,
    read_session,
    synth_session,
    write_session,
)
from .preprocessing import align_windows, fill_gaps, resample_to_4hz
from .recurrence import (
    RecurrenceMatrix,
    RpMode,
    SignConfig,
    Spectrum,
    dft,
    phase_sequence,
    phasic_rp,
    sign_fn,
    temporal_rp,
    unsigned_rp,
)
from .imaging import (
    ManifestRecord,
    RgbImage,
    emit_png,
    load_png,
    merge_rgb,
    normalize_quantize,
    read_manifest,
    write_manifest,
)
from .evaluation import (
    MetricsReport,
    evaluate,
    knn_predict,
    mape,
    pool_image,
    rmse,
    split_train_val,
)

__version__ = "0.1.0"

__all__ = [
    "TARGET_RATE_HZ",
    "WINDOW_SAMPLES",
    "WINDOW_SECONDS",
    "ChannelId",
    "GlucoseReading",
    "LabeledWindow",
    "PhaseSpaceEmbedding",
    "RawChannelSeries",
    "embed",
    "SessionBundle",
    "SynthConfig",
    "read_cgm",
    "read_e4_channel",
    "read_session",
    "synth_session",
    "write_session",
    "align_windows",
    "fill_gaps",
    "resample_to_4hz",
    "RecurrenceMatrix",
    "RpMode",
    "SignConfig",
    "Spectrum",
    "dft",
    "phase_sequence",
    "phasic_rp",
    "sign_fn",
    "temporal_rp",
    "unsigned_rp",
    "ManifestRecord",
    "RgbImage",
    "emit_png",
    "load_png",
    "merge_rgb",
    "normalize_quantize",
    "read_manifest",
    "write_manifest",
    "MetricsReport",
    "evaluate",
    "knn_predict",
    "mape",
    "pool_image",
    "rmse",
    "split_train_val",
    "__version__",
]
