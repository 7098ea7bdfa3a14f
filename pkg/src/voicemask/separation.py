"""Source separation boundary: externally produced stems, or identity.

Separation models run outside this package. Their output arrives as a
pair of stem files, `<clip>.speech.wav` and `<clip>.residual.wav`, that
should sum back to the mixture. The identity fallback treats the whole
mixture as speech with a silent residual, which scrambles the full
scene instead of the voice alone.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .audio_io import AudioBuffer, read_wav
from .errors import ValidationError

ADDITIVITY_TOLERANCE = 0.05
SPEECH_STEM_SUFFIX = ".speech.wav"
RESIDUAL_STEM_SUFFIX = ".residual.wav"


@dataclass(frozen=True)
class StemPair:
    """Speech stem and everything-else residual of one mixture."""

    speech: AudioBuffer
    residual: AudioBuffer

    def __post_init__(self):
        if self.speech.sample_rate != self.residual.sample_rate:
            raise ValidationError(
                f"stem sample rates differ: {self.speech.sample_rate} vs {self.residual.sample_rate}"
            )
        if len(self.speech) != len(self.residual):
            raise ValidationError(f"stem lengths differ: {len(self.speech)} vs {len(self.residual)}")


def default_stem_paths(clip_path) -> tuple[Path, Path]:
    """Conventional stem locations for a clip: <clip>.speech.wav and <clip>.residual.wav."""
    clip_path = Path(clip_path)
    base = clip_path.with_suffix("") if clip_path.suffix.lower() == ".wav" else clip_path
    return Path(str(base) + SPEECH_STEM_SUFFIX), Path(str(base) + RESIDUAL_STEM_SUFFIX)


def identity_stems(mixture: AudioBuffer) -> StemPair:
    """Treat the whole mixture as speech; residual is silence."""
    zeros = AudioBuffer(np.zeros(len(mixture), dtype=np.float32), mixture.sample_rate)
    return StemPair(mixture, zeros)


def _fit_length(stem: AudioBuffer, target: int, name: str, path) -> AudioBuffer:
    difference = len(stem) - target
    if difference == 0:
        return stem
    if difference == -1:
        padded = np.concatenate([stem.samples, np.zeros(1, dtype=np.float32)])
        return AudioBuffer(padded, stem.sample_rate)
    if difference == 1:
        return AudioBuffer(stem.samples[:target], stem.sample_rate)
    raise ValidationError(f"{path}: {name} stem is {len(stem)} samples, mixture is {target} (off by more than 1)")


def load_stems(mixture: AudioBuffer, speech_path, residual_path) -> StemPair:
    """Load stem files and check them against their mixture.

    Stems must match the mixture sample rate; a one-sample length
    mismatch is repaired (zero pad or trim). When speech + residual
    strays from the mixture by more than 0.05 anywhere, the stems are
    accepted with a warning since separation is lossy in practice.
    """
    speech = read_wav(speech_path)
    residual = read_wav(residual_path)
    for name, stem, path in (("speech", speech, speech_path), ("residual", residual, residual_path)):
        if stem.sample_rate != mixture.sample_rate:
            raise ValidationError(
                f"{path}: {name} stem rate {stem.sample_rate} differs from mixture rate {mixture.sample_rate}"
            )
    speech = _fit_length(speech, len(mixture), "speech", speech_path)
    residual = _fit_length(residual, len(mixture), "residual", residual_path)
    deviation = float(np.max(np.abs(speech.samples + residual.samples - mixture.samples))) if len(mixture) else 0.0
    if deviation > ADDITIVITY_TOLERANCE:
        warnings.warn(
            f"stems deviate from mixture by up to {deviation:.3f} (tolerance {ADDITIVITY_TOLERANCE}); "
            "separation residue will color the output",
            stacklevel=2,
        )
    return StemPair(speech, residual)


def remix(speech: AudioBuffer, residual: AudioBuffer) -> AudioBuffer:
    """Samplewise sum of two equal-rate, equal-length buffers. Never clips."""
    if speech.sample_rate != residual.sample_rate:
        raise ValidationError(f"sample rates differ: {speech.sample_rate} vs {residual.sample_rate}")
    if len(speech) != len(residual):
        raise ValidationError(f"lengths differ: {len(speech)} vs {len(residual)}")
    return AudioBuffer(speech.samples + residual.samples, speech.sample_rate)
