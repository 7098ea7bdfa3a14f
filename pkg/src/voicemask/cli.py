"""Command-line front end.

Subcommands: `enforce` (process recordings), `attack` (re-apply the
pipeline to already-processed audio), `fragment` (dump cut points),
`mix` (build speech-over-background test mixtures), and `eval wer|scad|fad`.

Options resolve as flags > environment (`VOICEMASK_*`) > config file
(TOML) > defaults. Every run emits a JSON Lines log with the fully
resolved configuration and seed, so any output can be reproduced.

Exit codes: 0 success, 1 validation failure, 2 I/O failure.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import csv
import json
import os
import secrets
import sys
import tempfile
import time
import warnings
from dataclasses import dataclass

import tomli

from . import pipeline
from .audio_io import AudioBuffer, read_wav, write_wav
from .errors import ValidationError
from .fragmentation import FragmentationParams, fragment
from .metrics import (
    DETECTION_MODES,
    EIGENVALUE_TOLERANCE,
    FAD_CONVENTIONS,
    fad,
    gaussian_stats,
    read_embeddings,
    read_logits_csv,
    read_transcripts,
    scad,
    wer_report,
)
from .mixture import build_mixture, pad_or_trim
from .pipeline import BASELINES, SEPARATION_MODES, VAD_MODES, PipelineConfig
from .scramble import ScrambleParams, _derive_seed, texture_frame_bounds
from .separation import default_stem_paths, load_stems
from .vad import SpeechRegionTrack

PROG = "voicemask"
ENV_PREFIX = "VOICEMASK_"

SAMPLE_FORMATS = ("float32", "int16")


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on usage errors; the contract here is 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


@dataclass(frozen=True)
class _Option:
    name: str
    kind: type
    default: object
    flag: str
    help: str
    choices: tuple | None = None


# One registry drives flag creation, env lookup, config-file validation,
# and the resolved-config log line.
_OPTIONS = (
    _Option("vad_mode", str, "always", "--vad", "speech detection mode", VAD_MODES),
    _Option("vad_threshold", float, 0.3, "--vad-threshold", "speech probability threshold"),
    _Option("vad_track", str, None, "--vad-track", "speech probability track CSV (external mode)"),
    _Option("region_pad_seconds", float, 0.1, "--pad", "padding added around detected regions, seconds"),
    _Option("merge_gap_seconds", float, 0.1, "--merge-gap", "merge regions closer than this, seconds"),
    _Option("separation_mode", str, "identity", "--sep", "source separation mode", SEPARATION_MODES),
    _Option("speech_stem", str, None, "--speech-stem", "speech stem WAV (stems mode)"),
    _Option("residual_stem", str, None, "--residual-stem", "residual stem WAV (stems mode)"),
    _Option("reverse", bool, True, "--reverse", "reverse samples within each segment"),
    _Option("reorder", bool, False, "--reorder", "randomly reorder segments within each texture frame"),
    _Option("seed", int, None, "--seed", "RNG seed; fresh entropy when omitted (always logged)"),
    _Option("texture_frame_seconds", float, 2.0, "--texture-frame", "texture frame length, seconds"),
    _Option("overlap_fraction", float, 0.05, "--overlap", "segment overlap fraction for crossfades"),
    _Option("rms_window_seconds", float, 0.025, "--rms-window", "RMS analysis window, seconds"),
    _Option("rms_hop_seconds", float, 0.010, "--rms-hop", "RMS analysis hop, seconds"),
    _Option("roi_threshold_db", float, 6.0, "--roi-threshold", "low-energy threshold below frame max, dB"),
    _Option("min_segment_seconds", float, 0.050, "--min-segment", "minimum segment length, seconds"),
    _Option("crossfade_seconds", float, 0.01, "--crossfade", "processed/passthrough boundary crossfade, seconds"),
    _Option("baseline", str, "none", "--baseline", "baseline transform instead of the full method", BASELINES),
    _Option("sample_format", str, "float32", "--format", "output WAV sample format", SAMPLE_FORMATS),
)
_OPTION_NAMES = {option.name for option in _OPTIONS}

_PIPELINE_OPTION_NAMES = _OPTION_NAMES
_FRAGMENT_OPTION_NAMES = {
    "texture_frame_seconds",
    "rms_window_seconds",
    "rms_hop_seconds",
    "roi_threshold_db",
    "min_segment_seconds",
}
_MIX_OPTION_NAMES = {"sample_format"}


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", metavar="FILE", help="TOML config file")
    parser.add_argument("--log", metavar="FILE", help="JSON Lines run log (default: stderr)")
    parser.add_argument("--validate-only", action="store_true", help="check inputs and config, write nothing")


def _add_options(parser: argparse.ArgumentParser, names) -> None:
    for option in _OPTIONS:
        if option.name not in names:
            continue
        if option.kind is bool:
            parser.add_argument(
                option.flag,
                dest=option.name,
                action=argparse.BooleanOptionalAction,
                default=None,
                help=option.help,
            )
        else:
            parser.add_argument(
                option.flag,
                dest=option.name,
                type=str if option.kind is str else option.kind,
                default=None,
                choices=option.choices,
                help=option.help,
            )


def build_parser() -> _Parser:
    parser = _Parser(prog=PROG, description="Render speech in recordings unintelligible while preserving the scene.")
    commands = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    for name, summary in (
        ("enforce", "process recordings so speech content is unrecoverable"),
        ("attack", "re-apply the pipeline to already-processed audio"),
    ):
        sub = commands.add_parser(name, help=summary, description=summary)
        sub.add_argument("--in", dest="input_path", metavar="WAV", help="input recording")
        sub.add_argument("--out", dest="output_path", metavar="WAV", help="output path")
        sub.add_argument("--manifest", metavar="CSV", help="batch manifest: input_path,output_path[,track_path,speech_stem,residual_stem]")
        sub.add_argument("--jobs", type=int, default=1, help="parallel workers for batch mode")
        _add_options(sub, _PIPELINE_OPTION_NAMES)
        _add_common(sub)

    sub = commands.add_parser("fragment", help="dump per-frame cut points as CSV", description="dump per-frame cut points as CSV")
    sub.add_argument("--in", dest="input_path", metavar="WAV", required=True)
    sub.add_argument("--out", dest="output_path", metavar="CSV", required=True,
                     help="CSV of frame_index,cut_point_sample (sample index within the frame)")
    _add_options(sub, _FRAGMENT_OPTION_NAMES)
    _add_common(sub)

    sub = commands.add_parser("mix", help="build speech-over-background evaluation mixtures",
                              description="RMS-match speech and background, boost background 6 dB, sum, peak-normalize")
    sub.add_argument("--speech", metavar="WAV", help="speech recording")
    sub.add_argument("--background", metavar="WAV", help="background recording")
    sub.add_argument("--out", dest="output_path", metavar="WAV", help="output path")
    sub.add_argument("--manifest", metavar="CSV", help="batch manifest: speech_path,background_path,output_path")
    sub.add_argument("--duration", type=float, help="pad or trim both inputs to this many seconds first")
    sub.add_argument("--jobs", type=int, default=1, help="parallel workers for batch mode")
    _add_options(sub, _MIX_OPTION_NAMES)
    _add_common(sub)

    sub = commands.add_parser("eval", help="compute evaluation metrics", description="compute evaluation metrics")
    metrics = sub.add_subparsers(dest="metric", required=True, metavar="METRIC")

    wer_cmd = metrics.add_parser("wer", help="word error rate against reference transcripts")
    wer_cmd.add_argument("--ref", required=True, metavar="TSV", help="reference transcripts")
    wer_cmd.add_argument("--hyp", required=True, action="append", metavar="TSV",
                         help="hypothesis transcripts; repeat for multiple recognizers")
    wer_cmd.add_argument("--out", metavar="JSON", help="report path (default: stdout)")
    _add_common(wer_cmd)

    scad_cmd = metrics.add_parser("scad", help="source classification accuracy drop")
    scad_cmd.add_argument("--orig", required=True, metavar="CSV", help="logits for original clips")
    scad_cmd.add_argument("--proc", required=True, metavar="CSV", help="logits for processed clips")
    scad_cmd.add_argument("--mode", default="mixture", choices=DETECTION_MODES)
    scad_cmd.add_argument("--out", metavar="JSON", help="report path (default: stdout)")
    _add_common(scad_cmd)

    fad_cmd = metrics.add_parser("fad", help="Frechet distance between embedding sets")
    fad_cmd.add_argument("--ref", required=True, metavar="EMB", help="reference embeddings")
    fad_cmd.add_argument("--test", required=True, metavar="EMB", help="embeddings under test")
    fad_cmd.add_argument("--convention", default="squared", choices=FAD_CONVENTIONS,
                         help="mean-distance convention")
    fad_cmd.add_argument("--out", metavar="JSON", help="report path (default: stdout)")
    _add_common(fad_cmd)

    return parser


# ---------------------------------------------------------------------------
# Option resolution


def _load_config_file(path) -> dict:
    with open(path, "rb") as handle:
        try:
            document = tomli.load(handle)
        except tomli.TOMLDecodeError as exc:
            raise ValidationError(f"{path}: {exc}") from exc
    unknown = set(document) - _OPTION_NAMES
    if unknown:
        raise ValidationError(f"{path}: unknown config keys {sorted(unknown)}")
    return document


def _parse_env(option: _Option, raw: str):
    if option.kind is bool:
        lowered = raw.strip().lower()
        if lowered in ("1", "true", "yes", "on"):
            return True
        if lowered in ("0", "false", "no", "off"):
            return False
        raise ValidationError(f"{ENV_PREFIX}{option.name.upper()}: expected a boolean, got {raw!r}")
    try:
        return option.kind(raw)
    except ValueError as exc:
        raise ValidationError(f"{ENV_PREFIX}{option.name.upper()}: {exc}") from exc


def _check_config_value(option: _Option, value):
    if option.kind is float and isinstance(value, int) and not isinstance(value, bool):
        value = float(value)
    if option.kind is bool and not isinstance(value, bool):
        raise ValidationError(f"config key {option.name}: expected a boolean")
    if option.kind is int and (isinstance(value, bool) or not isinstance(value, int)):
        raise ValidationError(f"config key {option.name}: expected an integer")
    if option.kind is float and not isinstance(value, float):
        raise ValidationError(f"config key {option.name}: expected a number")
    if option.kind is str and not isinstance(value, str):
        raise ValidationError(f"config key {option.name}: expected a string")
    if option.choices is not None and value not in option.choices:
        raise ValidationError(f"config key {option.name}: expected one of {option.choices}")
    return value


def resolve_options(args: argparse.Namespace, names) -> dict:
    """Apply the precedence flags > environment > config file > defaults."""
    document = _load_config_file(args.config) if getattr(args, "config", None) else {}
    resolved = {}
    for option in _OPTIONS:
        if option.name not in names:
            continue
        flag_value = getattr(args, option.name, None)
        if flag_value is not None:
            resolved[option.name] = flag_value
            continue
        raw = os.environ.get(ENV_PREFIX + option.name.upper())
        if raw is not None:
            value = _parse_env(option, raw)
            if option.choices is not None and value not in option.choices:
                raise ValidationError(
                    f"{ENV_PREFIX}{option.name.upper()}: expected one of {option.choices}"
                )
            resolved[option.name] = value
            continue
        if option.name in document:
            resolved[option.name] = _check_config_value(option, document[option.name])
            continue
        resolved[option.name] = option.default
    return resolved


# ---------------------------------------------------------------------------
# Run log


class _RunLog:
    def __init__(self, path=None):
        self._handle = open(path, "w", encoding="utf-8") if path else sys.stderr
        self._owned = path is not None

    def write(self, record: dict) -> None:
        json.dump(record, self._handle, sort_keys=True)
        self._handle.write("\n")
        self._handle.flush()

    def close(self) -> None:
        if self._owned:
            self._handle.close()


# ---------------------------------------------------------------------------
# Manifests

ENFORCE_COLUMNS = ("input_path", "output_path")
ENFORCE_OPTIONAL_COLUMNS = ("track_path", "speech_stem", "residual_stem")
MIX_COLUMNS = ("speech_path", "background_path", "output_path")


def _read_manifest(path, required, optional=()) -> list[dict]:
    base = os.path.dirname(os.path.abspath(path))
    entries = []
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.DictReader(handle)
        fields = tuple(reader.fieldnames or ())
        missing = [c for c in required if c not in fields]
        unknown = [c for c in fields if c not in required + tuple(optional)]
        if missing or unknown:
            raise ValidationError(
                f"{path}: manifest columns must be {required} plus optional {optional}; got {fields}"
            )
        for number, row in enumerate(reader, start=2):
            entry = {}
            for column in fields:
                value = (row.get(column) or "").strip()
                if column in required and not value:
                    raise ValidationError(f"{path}: row {number} is missing {column}")
                # Paths resolve relative to the manifest's own directory.
                entry[column] = value and (value if os.path.isabs(value) else os.path.join(base, value)) or None
            entries.append(entry)
    if not entries:
        raise ValidationError(f"{path}: manifest has no entries")
    return entries


# ---------------------------------------------------------------------------
# Pipeline subcommands


def _entry_config(resolved: dict, mixture: AudioBuffer, entry: dict, seed: int) -> PipelineConfig:
    track = None
    track_path = entry.get("track_path") or resolved["vad_track"]
    if resolved["vad_mode"] == "external":
        if not track_path:
            raise ValidationError("external VAD mode requires --vad-track or a track_path manifest column")
        track = SpeechRegionTrack.read_csv(track_path)

    stems = None
    if resolved["separation_mode"] == "stems":
        speech_path = entry.get("speech_stem") or resolved["speech_stem"]
        residual_path = entry.get("residual_stem") or resolved["residual_stem"]
        if not speech_path and not residual_path:
            speech_path, residual_path = default_stem_paths(entry["input_path"])
        if not speech_path or not residual_path:
            raise ValidationError("stems mode requires both speech and residual stem paths")
        stems = load_stems(mixture, speech_path, residual_path)

    return PipelineConfig(
        vad_mode=resolved["vad_mode"],
        vad_threshold=resolved["vad_threshold"],
        vad_track=track,
        merge_gap_seconds=resolved["merge_gap_seconds"],
        region_pad_seconds=resolved["region_pad_seconds"],
        separation_mode=resolved["separation_mode"],
        stems=stems,
        scramble=ScrambleParams(
            texture_frame_seconds=resolved["texture_frame_seconds"],
            overlap_fraction=resolved["overlap_fraction"],
            reverse=resolved["reverse"],
            reorder=resolved["reorder"],
            seed=seed,
        ),
        fragmentation=FragmentationParams(
            window_seconds=resolved["rms_window_seconds"],
            hop_seconds=resolved["rms_hop_seconds"],
            threshold_db=resolved["roi_threshold_db"],
            min_segment_seconds=resolved["min_segment_seconds"],
        ),
        boundary_crossfade_seconds=resolved["crossfade_seconds"],
        baseline=resolved["baseline"],
    )


def _atomic_write_wav(buffer: AudioBuffer, path, sample_format: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, temp_path = tempfile.mkstemp(prefix=".voicemask-", suffix=".wav", dir=directory)
    os.close(fd)
    try:
        write_wav(buffer, temp_path, sample_format)
        os.replace(temp_path, path)
    except BaseException:
        if os.path.exists(temp_path):
            os.unlink(temp_path)
        raise


def _classify_error(exc: Exception) -> str:
    return "io" if isinstance(exc, OSError) else "validation"


def _process_entry(index: int, entry: dict, resolved: dict, seed: int, validate_only: bool) -> dict:
    record = {"event": "file", "index": index, "input": entry["input_path"], "output": entry["output_path"], "seed": seed}
    started = time.perf_counter()
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            mixture = read_wav(entry["input_path"])
            config = _entry_config(resolved, mixture, entry, seed)
            config.validate_inputs()
            if not validate_only:
                processed = pipeline.enforce(mixture, config)
                _atomic_write_wav(processed, entry["output_path"], resolved["sample_format"])
        record["warnings"] = [str(w.message) for w in caught]
        record["seconds"] = round(time.perf_counter() - started, 6)
        record["status"] = "validated" if validate_only else "written"
    except (ValueError, OSError) as exc:
        record["error"] = str(exc)
        record["error_kind"] = _classify_error(exc)
    return record


def _run_entries(entries, worker, jobs: int, log: _RunLog) -> int:
    if jobs > 1 and len(entries) > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(worker, range(len(entries)), entries))
    else:
        records = [worker(index, entry) for index, entry in enumerate(entries)]
    worst = 0
    for record in records:
        log.write(record)
        if "error" in record:
            worst = max(worst, 2 if record["error_kind"] == "io" else 1)
    log.write({"event": "done", "files": len(records), "failures": sum("error" in r for r in records)})
    return worst


class _EnforceWorker:
    """Picklable per-entry callable for the process pool."""

    def __init__(self, resolved, base_seed, per_entry_seeds, validate_only):
        self.resolved = resolved
        self.base_seed = base_seed
        self.per_entry_seeds = per_entry_seeds
        self.validate_only = validate_only

    def __call__(self, index, entry):
        seed = _derive_seed(self.base_seed, index) if self.per_entry_seeds else self.base_seed
        return _process_entry(index, entry, self.resolved, seed, self.validate_only)


def _cmd_enforce(args: argparse.Namespace) -> int:
    if bool(args.manifest) == bool(args.input_path and args.output_path):
        raise ValidationError("provide either --in/--out or --manifest")
    resolved = resolve_options(args, _PIPELINE_OPTION_NAMES)
    base_seed = resolved["seed"] if resolved["seed"] is not None else secrets.randbits(63)
    resolved["seed"] = base_seed

    log = _RunLog(args.log)
    try:
        log.write({"event": "config", "command": args.command, "config": resolved, "seed": base_seed})
        if args.manifest:
            entries = _read_manifest(args.manifest, ENFORCE_COLUMNS, ENFORCE_OPTIONAL_COLUMNS)
            worker = _EnforceWorker(resolved, base_seed, True, args.validate_only)
            return _run_entries(entries, worker, args.jobs, log)
        entry = {"input_path": args.input_path, "output_path": args.output_path}
        worker = _EnforceWorker(resolved, base_seed, False, args.validate_only)
        record = worker(0, entry)
        log.write(record)
        if "error" in record:
            print(f"{PROG}: {record['error']}", file=sys.stderr)
            return 2 if record["error_kind"] == "io" else 1
        return 0
    finally:
        log.close()


def _cmd_fragment(args: argparse.Namespace) -> int:
    resolved = resolve_options(args, _FRAGMENT_OPTION_NAMES)
    log = _RunLog(args.log)
    try:
        log.write({"event": "config", "command": "fragment", "config": resolved})
        buffer = read_wav(args.input_path)
        params = FragmentationParams(
            window_seconds=resolved["rms_window_seconds"],
            hop_seconds=resolved["rms_hop_seconds"],
            threshold_db=resolved["roi_threshold_db"],
            min_segment_seconds=resolved["min_segment_seconds"],
        )
        bounds = texture_frame_bounds(len(buffer), buffer.sample_rate, resolved["texture_frame_seconds"])
        rows = []
        for frame_index in range(len(bounds) - 1):
            frame = AudioBuffer(buffer.samples[bounds[frame_index] : bounds[frame_index + 1]], buffer.sample_rate)
            for cut in fragment(frame, params).cut_points:
                rows.append((frame_index, cut))
        if not args.validate_only:
            with open(args.output_path, "w", newline="", encoding="utf-8") as handle:
                writer = csv.writer(handle)
                writer.writerow(("frame_index", "cut_point_sample"))
                writer.writerows(rows)
        log.write({"event": "file", "input": args.input_path, "output": args.output_path,
                   "cut_points": len(rows), "frames": len(bounds) - 1,
                   "status": "validated" if args.validate_only else "written"})
        return 0
    finally:
        log.close()


class _MixWorker:
    def __init__(self, duration, sample_format, validate_only):
        self.duration = duration
        self.sample_format = sample_format
        self.validate_only = validate_only

    def __call__(self, index, entry):
        record = {"event": "file", "index": index, "speech": entry["speech_path"],
                  "background": entry["background_path"], "output": entry["output_path"]}
        started = time.perf_counter()
        try:
            with warnings.catch_warnings(record=True) as caught:
                warnings.simplefilter("always")
                speech = read_wav(entry["speech_path"])
                background = read_wav(entry["background_path"])
                if self.duration is not None:
                    speech = pad_or_trim(speech, self.duration)
                    background = pad_or_trim(background, self.duration)
                if not self.validate_only:
                    mixed = build_mixture(speech, background)
                    _atomic_write_wav(mixed, entry["output_path"], self.sample_format)
            record["warnings"] = [str(w.message) for w in caught]
            record["seconds"] = round(time.perf_counter() - started, 6)
            record["status"] = "validated" if self.validate_only else "written"
        except (ValueError, OSError) as exc:
            record["error"] = str(exc)
            record["error_kind"] = _classify_error(exc)
        return record


def _cmd_mix(args: argparse.Namespace) -> int:
    single = args.speech and args.background and args.output_path
    if bool(args.manifest) == bool(single):
        raise ValidationError("provide either --speech/--background/--out or --manifest")
    resolved = resolve_options(args, _MIX_OPTION_NAMES)
    log = _RunLog(args.log)
    try:
        log.write({"event": "config", "command": "mix", "config": resolved, "duration": args.duration})
        worker = _MixWorker(args.duration, resolved["sample_format"], args.validate_only)
        if args.manifest:
            entries = _read_manifest(args.manifest, MIX_COLUMNS)
            return _run_entries(entries, worker, args.jobs, log)
        entry = {"speech_path": args.speech, "background_path": args.background, "output_path": args.output_path}
        record = worker(0, entry)
        log.write(record)
        if "error" in record:
            print(f"{PROG}: {record['error']}", file=sys.stderr)
            return 2 if record["error_kind"] == "io" else 1
        return 0
    finally:
        log.close()


# ---------------------------------------------------------------------------
# Metric subcommands


def _emit_report(report: dict, out_path, log: _RunLog) -> None:
    text = json.dumps(report, indent=2, sort_keys=True)
    if out_path:
        with open(out_path, "w", encoding="utf-8") as handle:
            handle.write(text + "\n")
    else:
        print(text)
    log.write({"event": "report", **report})


def _cmd_eval(args: argparse.Namespace) -> int:
    log = _RunLog(args.log)
    try:
        if args.metric == "wer":
            references = read_transcripts(args.ref)
            hypothesis_sets = [read_transcripts(path) for path in args.hyp]
            if args.validate_only:
                log.write({"event": "validated", "metric": "wer", "files": [args.ref, *args.hyp]})
                return 0
            report = wer_report(references, hypothesis_sets, system_names=args.hyp)
            _emit_report(
                {
                    "metric": "wer",
                    "mean_wer": report.mean_wer,
                    "pooled_wer": report.pooled_wer,
                    "pair_count": report.pair_count,
                    "skipped_clips": list(report.skipped_clips),
                    "systems": list(args.hyp),
                    "convention": "per-clip cap at 100, arithmetic mean over clip/system pairs",
                    "tolerance": 0.0,
                },
                args.out,
                log,
            )
        elif args.metric == "scad":
            original = read_logits_csv(args.orig)
            processed = read_logits_csv(args.proc)
            if args.validate_only:
                log.write({"event": "validated", "metric": "scad", "files": [args.orig, args.proc]})
                return 0
            report = scad(original, processed, args.mode)
            _emit_report(
                {
                    "metric": "scad",
                    "scad": report.scad,
                    "original_accuracy": report.original_accuracy,
                    "processed_accuracy": report.processed_accuracy,
                    "trial_count": report.trial_count,
                    "original_ties": report.original_ties,
                    "processed_ties": report.processed_ties,
                    "mode": report.mode,
                    "convention": "score ties broken by class name and counted",
                    "tolerance": 0.0,
                },
                args.out,
                log,
            )
        else:
            reference = read_embeddings(args.ref)
            test = read_embeddings(args.test)
            if args.validate_only:
                log.write({"event": "validated", "metric": "fad", "files": [args.ref, args.test]})
                return 0
            with warnings.catch_warnings(record=True) as caught:
                warnings.simplefilter("always")
                value = fad(gaussian_stats(reference), gaussian_stats(test), args.convention)
            _emit_report(
                {
                    "metric": "fad",
                    "fad": value,
                    "convention": args.convention,
                    "tolerance": EIGENVALUE_TOLERANCE,
                    "ref_count": reference.count,
                    "test_count": test.count,
                    "dimension": reference.dimension,
                    "warnings": [str(w.message) for w in caught],
                },
                args.out,
                log,
            )
        return 0
    finally:
        log.close()


# ---------------------------------------------------------------------------


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command in ("enforce", "attack"):
            return _cmd_enforce(args)
        if args.command == "fragment":
            return _cmd_fragment(args)
        if args.command == "mix":
            return _cmd_mix(args)
        return _cmd_eval(args)
    except OSError as exc:
        print(f"{PROG}: {exc}", file=sys.stderr)
        return 2
    except (ValidationError, ValueError) as exc:
        print(f"{PROG}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
