"""Audio buffer primitives and WAV file I/O.

Buffers are mono float32 arrays with a nominal [-1, 1] amplitude range.
WAV support covers 16-bit PCM and 32-bit float payloads; multi-channel
files are downmixed to mono by channel averaging on read. Nothing in
this package resamples: operations that combine two buffers require
equal sample rates and fail otherwise.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.io import wavfile

from .errors import AudioFormatError, ClippingWarning

SILENCE_FLOOR_DB = -120.0
INT16_SCALE = 32768.0


@dataclass(frozen=True)
class AudioBuffer:
    """Mono audio samples plus their sample rate."""

    samples: np.ndarray
    sample_rate: int

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=np.float32)
        if samples.ndim != 1:
            raise ValueError(f"buffer must be one-dimensional, got shape {samples.shape}")
        if not isinstance(self.sample_rate, (int, np.integer)) or self.sample_rate <= 0:
            raise ValueError(f"sample rate must be a positive integer, got {self.sample_rate!r}")
        if samples.size and not np.isfinite(samples).all():
            raise ValueError("buffer contains non-finite samples")
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "sample_rate", int(self.sample_rate))

    def __len__(self):
        return self.samples.shape[0]

    @property
    def duration(self) -> float:
        """Length in seconds."""
        return len(self) / self.sample_rate


def rms(samples: np.ndarray) -> float:
    """RMS level of `samples` in dBFS.

    All-zero input maps to the defined silence floor (-120 dBFS) instead
    of negative infinity. An empty window has no defined level.
    """
    samples = np.asarray(samples)
    if samples.size == 0:
        raise ValueError("rms of an empty window is undefined")
    mean_square = float(np.mean(np.square(samples, dtype=np.float64)))
    if mean_square == 0.0:
        return SILENCE_FLOOR_DB
    return 10.0 * math.log10(mean_square)


def rms_linear(samples: np.ndarray) -> float:
    """RMS amplitude of `samples` on a linear scale."""
    samples = np.asarray(samples)
    if samples.size == 0:
        raise ValueError("rms of an empty window is undefined")
    return math.sqrt(float(np.mean(np.square(samples, dtype=np.float64))))


def nearest_zero_crossing(samples: np.ndarray, target: int, start: int, end: int) -> int:
    """Index nearest `target` within [start, end) where the signal touches zero.

    An index i qualifies when samples[i] == 0 or when samples[i-1] and
    samples[i] have opposite signs. Ties break toward the lower index.
    Returns `target` unchanged when the range contains no crossing.
    """
    samples = np.asarray(samples)
    n = samples.shape[0]
    if not 0 <= start < end <= n:
        raise ValueError(f"search range [{start}, {end}) invalid for buffer of {n} samples")
    if not start <= target < end:
        raise ValueError(f"target {target} outside search range [{start}, {end})")
    window = samples[start:end]
    mask = window == 0.0
    if start > 0:
        prev = samples[start - 1 : end - 1]
        mask = mask | (prev * window < 0)
    else:
        mask[1:] = mask[1:] | (window[:-1] * window[1:] < 0)
    candidates = np.flatnonzero(mask)
    if candidates.size == 0:
        return target
    distances = np.abs(candidates + start - target)
    return int(candidates[np.argmin(distances)] + start)  # argmin keeps the lower index on ties


def peak_normalize(buffer: AudioBuffer) -> AudioBuffer:
    """Scale the buffer so its largest absolute sample is exactly 1."""
    peak = float(np.max(np.abs(buffer.samples))) if len(buffer) else 0.0
    if peak == 0.0:
        raise ValueError("cannot peak-normalize a silent buffer")
    return AudioBuffer(buffer.samples / np.float32(peak), buffer.sample_rate)


def read_wav(path) -> AudioBuffer:
    """Read a 16-bit PCM or 32-bit float WAV file as a mono buffer.

    16-bit samples are scaled by 1/32768. Multi-channel content is
    averaged across channels. Other sample formats are rejected.
    """
    try:
        rate, data = wavfile.read(path)
    except ValueError as exc:
        message = str(exc)
        if "end of file" in message.lower() or "incomplete" in message.lower():
            raise OSError(f"{path}: truncated WAV file: {message}") from exc
        raise AudioFormatError(f"{path}: {message}") from exc
    if data.dtype == np.int16:
        samples = data.astype(np.float32) / np.float32(INT16_SCALE)
    elif data.dtype == np.float32:
        samples = data
    else:
        raise AudioFormatError(
            f"{path}: unsupported WAV sample format {data.dtype}; expected 16-bit PCM or 32-bit float"
        )
    if samples.ndim == 2:
        samples = samples.mean(axis=1)
    return AudioBuffer(samples, int(rate))


def write_wav(buffer: AudioBuffer, path, sample_format: str = "float32") -> None:
    """Write a buffer as a mono WAV file.

    float32 output preserves samples bit-exactly. int16 output rounds to
    the 16-bit grid and clips anything outside full scale, emitting a
    ClippingWarning with the clipped-sample count.
    """
    if sample_format == "float32":
        wavfile.write(path, buffer.sample_rate, buffer.samples)
    elif sample_format == "int16":
        scaled = np.round(buffer.samples.astype(np.float64) * INT16_SCALE)
        clipped = int(np.count_nonzero((scaled < -32768.0) | (scaled > 32767.0)))
        if clipped:
            warnings.warn(
                f"{clipped} sample(s) clipped while writing 16-bit PCM to {path}",
                ClippingWarning,
                stacklevel=2,
            )
        wavfile.write(path, buffer.sample_rate, np.clip(scaled, -32768.0, 32767.0).astype(np.int16))
    else:
        raise ValueError(f"unknown sample format {sample_format!r}; expected 'float32' or 'int16'")
