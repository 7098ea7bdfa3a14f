"""Construction of speech-over-background evaluation mixtures."""

from __future__ import annotations

import math

import numpy as np

from .audio_io import AudioBuffer, peak_normalize, rms_linear
from .errors import ValidationError

BACKGROUND_GAIN_DB = 6.0


def pad_or_trim(buffer: AudioBuffer, target_seconds: float) -> AudioBuffer:
    """Zero-pad or truncate a buffer to an exact duration."""
    if target_seconds < 0:
        raise ValueError("target duration must be non-negative")
    target = int(round(target_seconds * buffer.sample_rate))
    if target <= len(buffer):
        return AudioBuffer(buffer.samples[:target], buffer.sample_rate)
    padded = np.zeros(target, dtype=np.float32)
    padded[: len(buffer)] = buffer.samples
    return AudioBuffer(padded, buffer.sample_rate)


def build_mixture(speech: AudioBuffer, background: AudioBuffer) -> AudioBuffer:
    """Sum speech and background at a fixed level relationship.

    The shorter signal is zero-padded to the longer one, the background
    is scaled to the speech RMS plus 6 dB, and the sum is normalized to
    peak amplitude 1. Levels are measured over the common padded length,
    so the component difference is exactly +6 dB however the inputs
    overlap.
    """
    if speech.sample_rate != background.sample_rate:
        raise ValidationError(
            f"sample rates differ: speech {speech.sample_rate}, background {background.sample_rate}"
        )
    length = max(len(speech), len(background))
    if length == 0:
        raise ValueError("cannot mix empty signals")
    speech_samples = np.zeros(length, dtype=np.float32)
    speech_samples[: len(speech)] = speech.samples
    background_samples = np.zeros(length, dtype=np.float32)
    background_samples[: len(background)] = background.samples

    speech_rms = rms_linear(speech_samples)
    background_rms = rms_linear(background_samples)
    if speech_rms == 0.0 or background_rms == 0.0:
        raise ValueError("cannot mix silent signals")
    gain = speech_rms / background_rms * math.pow(10.0, BACKGROUND_GAIN_DB / 20.0)
    mixed = speech_samples + background_samples * np.float32(gain)
    return peak_normalize(AudioBuffer(mixed, speech.sample_rate))
