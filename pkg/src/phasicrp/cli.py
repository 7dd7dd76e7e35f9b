"""Command-line pipeline: synth -> encode -> eval.

All configuration travels in flags, diagnostics go to stderr, and data
(the metrics report) goes to stdout, so runs are reproducible from shell
history and output stays machine-parseable.  Every command is deterministic
given its flags, including --jobs.
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import evaluation, imaging, ingestion, preprocessing, recurrence
from .ingestion import SESSION_FILES, SynthConfig
from .recurrence import RpMode
from .signals import ChannelId, LabeledWindow

_CLI_MODES = {"temporal": RpMode.TEMPORAL_SIGNED, "phasic": RpMode.PHASIC}


def _parse_classes(text: str) -> tuple[tuple[float, float], ...]:
    pairs = []
    for item in text.split(","):
        freq, _, glucose = item.partition(":")
        try:
            pairs.append((float(freq), float(glucose)))
        except ValueError:
            raise argparse.ArgumentTypeError(
                f"expected 'freq:glucose' pairs, got {item!r}"
            ) from None
    return tuple(pairs)


def cmd_synth(args) -> int:
    out = Path(args.out)
    for i in range(args.sessions):
        config = SynthConfig(
            seed=args.seed + i,
            duration_s=args.duration_s,
            class_frequencies=args.classes,
            noise_amplitude=args.noise,
        )
        participant = f"p{i:02d}"
        bundle = ingestion.synth_session(config, participant=participant)
        ingestion.write_session(bundle, out / participant)
        print(
            f"{participant}: seed {config.seed}, {len(bundle.glucose)} readings",
            file=sys.stderr,
        )
    return 0


def _session_dirs(root: Path) -> list[Path]:
    if (root / SESSION_FILES[ChannelId.TEMP]).exists():
        return [root]
    subdirs = sorted(
        d for d in root.iterdir()
        if d.is_dir() and (d / SESSION_FILES[ChannelId.TEMP]).exists()
    )
    if not subdirs:
        raise FileNotFoundError(f"no session files found under {root}")
    return subdirs


def _window_image(task: tuple[LabeledWindow, RpMode]) -> imaging.RgbImage:
    window, mode = task
    build = recurrence.phasic_rp if mode is RpMode.PHASIC else recurrence.temporal_rp
    return imaging.merge_rgb(
        build(window.channel(ChannelId.TEMP)),
        build(window.channel(ChannelId.EDA)),
        build(window.channel(ChannelId.BVP)),
    )


def _load_windows(session_dir: Path) -> tuple[list[LabeledWindow], int]:
    bundle = ingestion.read_session(session_dir)
    bvp = bundle.bvp
    if bvp.rate == ingestion.BVP_RATE_HZ:
        bvp = preprocessing.resample_to_4hz(bvp)
    channels = [
        preprocessing.fill_gaps(s) for s in (bundle.temp, bundle.eda, bvp)
    ]
    windows = preprocessing.align_windows(
        *channels, bundle.glucose, participant=bundle.participant
    )
    return windows, len(bundle.glucose) - len(windows)


def _encode(session_root: Path, mode: RpMode, out: Path, jobs: int) -> Path:
    out.mkdir(parents=True, exist_ok=True)
    windows: list[LabeledWindow] = []
    total_dropped = 0
    for session_dir in _session_dirs(session_root):
        session_windows, dropped = _load_windows(session_dir)
        windows.extend(session_windows)
        total_dropped += dropped
        print(
            f"{session_dir.name}: {len(session_windows)} windows"
            f" ({dropped} dropped)",
            file=sys.stderr,
        )

    windows.sort(key=lambda w: (w.participant, w.end_time))
    tasks = [(w, mode) for w in windows]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            images = list(pool.map(_window_image, tasks, chunksize=4))
    else:
        images = [_window_image(t) for t in tasks]

    records = []
    counters: dict[str, int] = {}
    for window, image in zip(windows, images):
        idx = counters.get(window.participant, 0)
        counters[window.participant] = idx + 1
        name = f"{window.participant}_w{idx:04d}_{mode.value}.png"
        imaging.emit_png(image, out / name)
        records.append(
            imaging.ManifestRecord(
                image_path=name,
                label=window.label,
                end_time=window.end_time,
                participant=window.participant,
                mode=mode,
            )
        )
    manifest_path = out / "manifest.jsonl"
    imaging.write_manifest(records, manifest_path)
    print(
        f"encoded {len(records)} windows ({total_dropped} dropped)"
        f" -> {manifest_path}",
        file=sys.stderr,
    )
    return manifest_path


def cmd_encode(args) -> int:
    _encode(Path(args.session), _CLI_MODES[args.mode], Path(args.out), args.jobs)
    return 0


def cmd_eval(args) -> int:
    report = evaluation.evaluate(
        Path(args.manifest), ratio=args.ratio, seed=args.seed, k=args.k
    )
    print(report.to_json())
    return 0


def cmd_pipeline(args) -> int:
    manifest_path = _encode(
        Path(args.session), _CLI_MODES[args.mode], Path(args.out), args.jobs
    )
    if args.eval:
        report = evaluation.evaluate(
            manifest_path, ratio=args.ratio, seed=args.seed, k=args.k
        )
        print(report.to_json())
    return 0


def _add_eval_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--ratio", type=float, default=evaluation.DEFAULT_SPLIT_RATIO,
                        help="train fraction of the shuffled split")
    parser.add_argument("--seed", type=int, default=0, help="split shuffle seed")
    parser.add_argument("--k", type=int, default=evaluation.DEFAULT_K,
                        help="neighbor count for the k-NN baseline")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="phasicrp",
        description="Encode wearable sensor windows as recurrence-plot RGB "
                    "images and evaluate a glucose-regression baseline.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate deterministic synthetic sessions")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--duration-s", type=float, required=True)
    p.add_argument("--classes", type=_parse_classes, required=True,
                   help="comma-separated freq:glucose pairs, e.g. 0.5:90,1.5:180")
    p.add_argument("--noise", type=float, default=0.0,
                   help="uniform noise amplitude added to BVP")
    p.add_argument("--sessions", type=int, default=1,
                   help="number of sessions (seed and participant increment)")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("encode", help="encode session windows as PNGs + manifest")
    p.add_argument("--session", required=True,
                   help="session directory, or a directory of session directories")
    p.add_argument("--mode", choices=sorted(_CLI_MODES), required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("eval", help="k-NN evaluate an encoded manifest")
    p.add_argument("--manifest", required=True)
    _add_eval_flags(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("pipeline", help="encode, then optionally evaluate")
    p.add_argument("--session", required=True)
    p.add_argument("--mode", choices=sorted(_CLI_MODES), required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--eval", action="store_true")
    _add_eval_flags(p)
    p.set_defaults(func=cmd_pipeline)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
