"""Fragmentation of texture frames at low-energy points.

A frame is profiled with short sliding RMS windows (25 ms window, 10 ms
hop by default). Maximal runs of windows sitting at least `threshold_db`
below the frame's loudest window form candidate regions; each region
contributes one cut point, placed at the zero crossing nearest the
center of its quietest window. Cuts therefore land where the scene is
quiet and where splicing produces no step discontinuity.

Sample counts derive from seconds by truncation: int(seconds * rate).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .audio_io import SILENCE_FLOOR_DB, AudioBuffer, nearest_zero_crossing


@dataclass(frozen=True)
class FragmentationParams:
    """Knobs for the energy profile and cut placement."""

    window_seconds: float = 0.025
    hop_seconds: float = 0.010
    threshold_db: float = 6.0
    min_segment_seconds: float = 0.050

    def __post_init__(self):
        if self.window_seconds <= 0 or self.hop_seconds <= 0:
            raise ValueError("window and hop must be positive")
        if self.threshold_db <= 0:
            raise ValueError("threshold_db must be positive")
        if self.min_segment_seconds < 0:
            raise ValueError("min_segment_seconds must be non-negative")


@dataclass(frozen=True)
class RmsProfile:
    """Per-window RMS levels (dBFS) over one frame."""

    frame_rms: np.ndarray
    window_length: int
    hop_length: int
    n_samples: int


@dataclass(frozen=True)
class Roi:
    """Low-energy region, as a half-open sample interval within its frame."""

    start: int
    end: int

    def __post_init__(self):
        if not 0 <= self.start < self.end:
            raise ValueError(f"invalid region [{self.start}, {self.end})")


@dataclass(frozen=True)
class Segmentation:
    """Interior cut points partitioning a frame of `n_samples` samples."""

    cut_points: tuple[int, ...]
    n_samples: int

    def __post_init__(self):
        if self.n_samples <= 0:
            raise ValueError("segmentation needs at least one sample")
        previous = 0
        for cut in self.cut_points:
            if not previous < cut < self.n_samples:
                raise ValueError(f"cut points must be strictly increasing interior indices, got {self.cut_points}")
            previous = cut

    def bounds(self) -> tuple[int, ...]:
        return (0, *self.cut_points, self.n_samples)

    def segments(self) -> list[tuple[int, int]]:
        bounds = self.bounds()
        return [(bounds[i], bounds[i + 1]) for i in range(len(bounds) - 1)]


def compute_rms_profile(samples: np.ndarray, window_length: int, hop_length: int) -> RmsProfile:
    """Sliding-window RMS profile in dBFS.

    A frame shorter than one window yields a single entry covering all of
    it. All-zero windows map to the silence floor.
    """
    samples = np.asarray(samples, dtype=np.float64)
    n = samples.shape[0]
    if n == 0:
        raise ValueError("cannot profile an empty frame")
    if window_length <= 0 or hop_length <= 0:
        raise ValueError("window and hop lengths must be positive")
    if n < window_length:
        window_length = n
    count = (n - window_length) // hop_length + 1
    cumulative = np.concatenate(([0.0], np.cumsum(np.square(samples))))
    starts = np.arange(count) * hop_length
    mean_square = (cumulative[starts + window_length] - cumulative[starts]) / window_length
    levels = np.full(count, SILENCE_FLOOR_DB)
    positive = mean_square > 0
    levels[positive] = 10.0 * np.log10(mean_square[positive])
    return RmsProfile(levels, window_length, hop_length, n)


def _low_energy_runs(profile: RmsProfile, threshold_db: float) -> list[tuple[int, int]]:
    """Maximal runs (inclusive window-index pairs) at or below max - threshold."""
    levels = profile.frame_rms
    cutoff = float(np.max(levels)) - threshold_db
    low = levels <= cutoff
    runs = []
    edges = np.flatnonzero(np.diff(np.concatenate(([False], low, [False])).astype(np.int8)))
    for i in range(0, edges.size, 2):
        runs.append((int(edges[i]), int(edges[i + 1]) - 1))
    return runs


def find_rois(profile: RmsProfile, threshold_db: float) -> list[Roi]:
    """Low-energy regions of the frame, in sample coordinates."""
    rois = []
    for first, last in _low_energy_runs(profile, threshold_db):
        start = first * profile.hop_length
        end = min(last * profile.hop_length + profile.window_length, profile.n_samples)
        rois.append(Roi(start, end))
    return rois


def fragment(frame: AudioBuffer, params: FragmentationParams | None = None) -> Segmentation:
    """Partition one texture frame at low-energy zero crossings.

    Each low-energy region contributes the zero crossing nearest the
    center of its quietest window (ties toward the earlier window).
    Duplicate cuts collapse; cuts at the frame edges are dropped.
    Segments shorter than the minimum merge into their preceding
    segment, or into the following one when they open the frame, so no
    interior segment falls below the minimum. A frame with no
    low-energy region stays whole.
    """
    params = params or FragmentationParams()
    x = frame.samples
    n = len(frame)
    if n == 0:
        raise ValueError("cannot fragment an empty frame")
    window_length = max(1, int(params.window_seconds * frame.sample_rate))
    hop_length = max(1, int(params.hop_seconds * frame.sample_rate))
    profile = compute_rms_profile(x, window_length, hop_length)

    cuts = set()
    for first, last in _low_energy_runs(profile, params.threshold_db):
        quietest = first + int(np.argmin(profile.frame_rms[first : last + 1]))
        target = quietest * profile.hop_length + profile.window_length // 2
        roi_start = first * profile.hop_length
        roi_end = min(last * profile.hop_length + profile.window_length, n)
        cut = nearest_zero_crossing(x, target, roi_start, roi_end)
        if 0 < cut < n:
            cuts.add(cut)

    bounds = [0, *sorted(cuts), n]
    min_length = int(params.min_segment_seconds * frame.sample_rate)
    while len(bounds) > 2:
        lengths = [bounds[i + 1] - bounds[i] for i in range(len(bounds) - 1)]
        short = next((i for i, length in enumerate(lengths) if length < min_length), None)
        if short is None:
            break
        del bounds[max(short, 1)]  # merge into the preceding segment, or following for the first
    return Segmentation(tuple(bounds[1:-1]), n)
