"""Voice activity: external probability tracks and built-in fallbacks.

Detection models run outside this package and hand over their output as
a track file: one row per analysis window with a speech probability.
This module turns those tracks into merged active regions and provides
two model-free modes, `always` (treat the whole clip as speech) and
`energy` (windows louder than the clip median by 6 dB), the latter
strictly a development stand-in, not a speech detector.

The reference analysis grid is 500 ms windows every 440 ms.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .audio_io import AudioBuffer, rms
from .errors import ValidationError

TRACK_HEADER = ("start_sec", "end_sec", "probability")
DEFAULT_WINDOW_SECONDS = 0.5
DEFAULT_HOP_SECONDS = 0.44
DEFAULT_THRESHOLD = 0.3
DEFAULT_MERGE_GAP_SECONDS = 0.1
DEFAULT_PAD_SECONDS = 0.1
ENERGY_MARGIN_DB = 6.0


@dataclass(frozen=True)
class TrackEntry:
    """One analysis window with its speech probability."""

    start: float
    end: float
    probability: float

    def __post_init__(self):
        if not 0.0 <= self.start < self.end:
            raise ValidationError(f"invalid window [{self.start}, {self.end})")
        if not 0.0 <= self.probability <= 1.0:
            raise ValidationError(f"probability {self.probability} outside [0, 1]")


@dataclass(frozen=True)
class SpeechRegionTrack:
    """Chronological sequence of windowed speech probabilities."""

    entries: tuple[TrackEntry, ...]

    def __post_init__(self):
        starts = [entry.start for entry in self.entries]
        if starts != sorted(starts):
            raise ValidationError("track entries must be ordered by start time")

    @classmethod
    def read_csv(cls, path) -> "SpeechRegionTrack":
        with open(path, newline="", encoding="utf-8") as handle:
            reader = csv.reader(handle)
            try:
                header = next(reader)
            except StopIteration:
                raise ValidationError(f"{path}: empty track file") from None
            if tuple(column.strip() for column in header) != TRACK_HEADER:
                raise ValidationError(f"{path}: expected header {','.join(TRACK_HEADER)}, got {','.join(header)}")
            entries = []
            for row_number, row in enumerate(reader, start=2):
                if not row:
                    continue
                if len(row) != 3:
                    raise ValidationError(f"{path}:{row_number}: expected 3 columns, got {len(row)}")
                try:
                    entries.append(TrackEntry(float(row[0]), float(row[1]), float(row[2])))
                except ValueError as exc:
                    raise ValidationError(f"{path}:{row_number}: {exc}") from None
        return cls(tuple(entries))

    def write_csv(self, path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as handle:
            writer = csv.writer(handle)
            writer.writerow(TRACK_HEADER)
            for entry in self.entries:
                writer.writerow([f"{entry.start:.6f}", f"{entry.end:.6f}", f"{entry.probability:.6f}"])


@dataclass(frozen=True)
class ActiveRegions:
    """Sorted, disjoint speech intervals in seconds."""

    intervals: tuple[tuple[float, float], ...]

    def __post_init__(self):
        previous_end = None
        for start, end in self.intervals:
            if start >= end:
                raise ValidationError(f"empty region [{start}, {end})")
            if previous_end is not None and start < previous_end:
                raise ValidationError("regions must be sorted and disjoint")
            previous_end = end

    def __bool__(self):
        return bool(self.intervals)

    @property
    def total_duration(self) -> float:
        return sum(end - start for start, end in self.intervals)


def window_schedule(
    duration: float,
    window_seconds: float = DEFAULT_WINDOW_SECONDS,
    hop_seconds: float = DEFAULT_HOP_SECONDS,
) -> list[tuple[float, float]]:
    """Analysis windows covering `duration` seconds.

    Window k starts at k * hop for every start strictly inside the clip;
    the final window is truncated at the clip end.
    """
    if duration < 0:
        raise ValueError("duration must be non-negative")
    if window_seconds <= 0 or hop_seconds <= 0:
        raise ValueError("window and hop must be positive")
    schedule = []
    k = 0
    while k * hop_seconds < duration:
        start = k * hop_seconds
        schedule.append((start, min(start + window_seconds, duration)))
        k += 1
    return schedule


def merge_intervals(intervals, merge_gap: float = 0.0) -> tuple[tuple[float, float], ...]:
    """Union of intervals, joining neighbors separated by at most `merge_gap`."""
    merged: list[list[float]] = []
    for start, end in sorted(intervals):
        if merged and start - merged[-1][1] <= merge_gap:
            merged[-1][1] = max(merged[-1][1], end)
        else:
            merged.append([start, end])
    return tuple((start, end) for start, end in merged)


def threshold_track(
    track: SpeechRegionTrack,
    threshold: float = DEFAULT_THRESHOLD,
    merge_gap: float = DEFAULT_MERGE_GAP_SECONDS,
) -> ActiveRegions:
    """Windows at or above `threshold` merged into active regions."""
    active = [(entry.start, entry.end) for entry in track.entries if entry.probability >= threshold]
    return ActiveRegions(merge_intervals(active, merge_gap))


def pad_regions(regions: ActiveRegions, pad_seconds: float, duration: float) -> ActiveRegions:
    """Widen each region by `pad_seconds` per side, clipped to [0, duration]."""
    padded = []
    for start, end in regions.intervals:
        start = max(0.0, start - pad_seconds)
        end = min(duration, end + pad_seconds)
        if start < end:
            padded.append((start, end))
    return ActiveRegions(merge_intervals(padded))


def detect(
    buffer: AudioBuffer,
    mode: str = "always",
    track: SpeechRegionTrack | None = None,
    threshold: float = DEFAULT_THRESHOLD,
    merge_gap: float = DEFAULT_MERGE_GAP_SECONDS,
    pad_seconds: float = DEFAULT_PAD_SECONDS,
    window_seconds: float = DEFAULT_WINDOW_SECONDS,
    hop_seconds: float = DEFAULT_HOP_SECONDS,
) -> ActiveRegions:
    """Active speech regions of a buffer under the selected mode.

    `always` marks the whole clip. `external` thresholds a supplied
    track. `energy` marks analysis windows whose RMS exceeds the median
    window RMS by 6 dB; silence therefore yields no regions. External
    and energy regions are padded by `pad_seconds` per side.
    """
    duration = buffer.duration
    if mode == "always":
        if duration == 0:
            return ActiveRegions(())
        return ActiveRegions(((0.0, duration),))
    if mode == "external":
        if track is None:
            raise ValidationError("external VAD mode requires a track")
        regions = threshold_track(track, threshold, merge_gap)
        return pad_regions(regions, pad_seconds, duration)
    if mode == "energy":
        schedule = window_schedule(duration, window_seconds, hop_seconds)
        if not schedule:
            return ActiveRegions(())
        levels = []
        for start, end in schedule:
            first = int(round(start * buffer.sample_rate))
            last = min(int(round(end * buffer.sample_rate)), len(buffer))
            levels.append(rms(buffer.samples[first:last]) if last > first else None)
        valid = [level for level in levels if level is not None]
        cutoff = float(np.median(valid)) + ENERGY_MARGIN_DB
        active = [
            window
            for window, level in zip(schedule, levels)
            if level is not None and level > cutoff
        ]
        regions = ActiveRegions(merge_intervals(active, merge_gap))
        return pad_regions(regions, pad_seconds, duration)
    raise ValidationError(f"unknown VAD mode {mode!r}; expected always, external, or energy")
