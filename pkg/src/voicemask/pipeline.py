"""End-to-end enforcement: detect speech, separate, scramble, remix.

Only detected speech regions are touched; everything outside them (and
outside the short boundary crossfades at region edges) passes through
bit-exactly. Within a region the speech stem is scrambled, summed with
the residual stem, and joined to the passthrough signal with an
equal-power crossfade. The attack entry point re-runs this exact code
path on already-processed audio to measure how much a determined
listener could undo.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .audio_io import AudioBuffer
from .errors import ValidationError
from .fragmentation import FragmentationParams
from .scramble import ScrambleParams, _resolve_seed, scramble
from .separation import StemPair, identity_stems
from .vad import (
    DEFAULT_HOP_SECONDS,
    DEFAULT_MERGE_GAP_SECONDS,
    DEFAULT_PAD_SECONDS,
    DEFAULT_THRESHOLD,
    DEFAULT_WINDOW_SECONDS,
    ActiveRegions,
    SpeechRegionTrack,
    detect,
)

VAD_MODES = ("always", "external", "energy")
SEPARATION_MODES = ("identity", "stems")
BASELINES = ("none", "white_noise", "reorder_only")


@dataclass(frozen=True)
class PipelineConfig:
    """Everything `enforce` needs besides the audio itself."""

    vad_mode: str = "always"
    vad_threshold: float = DEFAULT_THRESHOLD
    vad_track: SpeechRegionTrack | None = None
    vad_window_seconds: float = DEFAULT_WINDOW_SECONDS
    vad_hop_seconds: float = DEFAULT_HOP_SECONDS
    merge_gap_seconds: float = DEFAULT_MERGE_GAP_SECONDS
    region_pad_seconds: float = DEFAULT_PAD_SECONDS
    separation_mode: str = "identity"
    stems: StemPair | None = None
    scramble: ScrambleParams = field(default_factory=ScrambleParams)
    fragmentation: FragmentationParams = field(default_factory=FragmentationParams)
    boundary_crossfade_seconds: float = 0.01
    baseline: str = "none"

    def __post_init__(self):
        if self.vad_mode not in VAD_MODES:
            raise ValidationError(f"unknown VAD mode {self.vad_mode!r}; expected one of {VAD_MODES}")
        if self.separation_mode not in SEPARATION_MODES:
            raise ValidationError(
                f"unknown separation mode {self.separation_mode!r}; expected one of {SEPARATION_MODES}"
            )
        if self.baseline not in BASELINES:
            raise ValidationError(f"unknown baseline {self.baseline!r}; expected one of {BASELINES}")
        if self.boundary_crossfade_seconds < 0:
            raise ValidationError("boundary crossfade must be non-negative")
        if self.region_pad_seconds < 0 or self.merge_gap_seconds < 0:
            raise ValidationError("region padding and merge gap must be non-negative")

    def validate_inputs(self) -> None:
        """Check cross-field requirements that depend on attached data."""
        if self.vad_mode == "external" and self.vad_track is None:
            raise ValidationError("external VAD mode requires a track")
        if self.separation_mode == "stems" and self.stems is None:
            raise ValidationError("stems separation mode requires loaded stems")


def white_noise_baseline(buffer: AudioBuffer, seed: int | None = None) -> AudioBuffer:
    """Uniform white noise matching the input's length and RMS."""
    if len(buffer) == 0:
        return AudioBuffer(np.zeros(0, dtype=np.float32), buffer.sample_rate)
    rng = np.random.default_rng(_resolve_seed(seed))
    noise = rng.uniform(-1.0, 1.0, len(buffer))
    target = float(np.mean(np.square(buffer.samples, dtype=np.float64)))
    if target == 0.0:
        return AudioBuffer(np.zeros(len(buffer), dtype=np.float32), buffer.sample_rate)
    scale = math.sqrt(target / float(np.mean(np.square(noise))))
    return AudioBuffer((noise * scale).astype(np.float32), buffer.sample_rate)


def _equal_power_fades(length: int) -> tuple[np.ndarray, np.ndarray]:
    """(fade_out, fade_in) gain pairs with fade_out**2 + fade_in**2 == 1."""
    angles = (np.arange(1, length + 1, dtype=np.float64) / (length + 1)) * (math.pi / 2.0)
    return np.cos(angles), np.sin(angles)


def enforce(mixture: AudioBuffer, config: PipelineConfig | None = None) -> AudioBuffer:
    """Render detected speech unintelligible, leaving the rest untouched.

    The reorder-only baseline is a config rewrite (always-on VAD,
    identity separation, reversal off, reordering on) through this same
    code path; the white-noise baseline replaces the whole clip. Given
    the same seed the output is bit-for-bit reproducible.
    """
    config = config or PipelineConfig()
    config.validate_inputs()
    if config.baseline == "white_noise":
        return white_noise_baseline(mixture, config.scramble.seed)
    if config.baseline == "reorder_only":
        config = replace(
            config,
            baseline="none",
            vad_mode="always",
            separation_mode="identity",
            stems=None,
            scramble=replace(config.scramble, reverse=False, reorder=True),
        )

    regions = detect(
        mixture,
        config.vad_mode,
        track=config.vad_track,
        threshold=config.vad_threshold,
        merge_gap=config.merge_gap_seconds,
        pad_seconds=config.region_pad_seconds,
        window_seconds=config.vad_window_seconds,
        hop_seconds=config.vad_hop_seconds,
    )
    if not regions:
        return AudioBuffer(mixture.samples.copy(), mixture.sample_rate)

    stems = config.stems if config.separation_mode == "stems" else identity_stems(mixture)
    if len(stems.speech) != len(mixture) or stems.speech.sample_rate != mixture.sample_rate:
        raise ValidationError("stems do not match the mixture in length or rate")

    rate = mixture.sample_rate
    n = len(mixture)
    out = mixture.samples.copy()
    crossfade = int(round(config.boundary_crossfade_seconds * rate))
    seed = _resolve_seed(config.scramble.seed)
    scramble_params = replace(config.scramble, seed=seed)

    for start_sec, end_sec in regions.intervals:
        first = max(0, int(round(start_sec * rate)))
        last = min(n, int(round(end_sec * rate)))
        if last <= first:
            continue
        speech_slice = AudioBuffer(stems.speech.samples[first:last], rate)
        scrambled = scramble(speech_slice, scramble_params, config.fragmentation).samples
        region = scrambled + stems.residual.samples[first:last]

        fade = min(crossfade, (last - first) // 2)
        if fade > 0:
            fade_out, fade_in = _equal_power_fades(fade)
            if first > 0:  # joined to passthrough on the left
                original = mixture.samples[first : first + fade].astype(np.float64)
                region[:fade] = (fade_out * original + fade_in * region[:fade].astype(np.float64)).astype(np.float32)
            if last < n:  # joined to passthrough on the right
                original = mixture.samples[last - fade : last].astype(np.float64)
                region[-fade:] = (fade_out * region[-fade:].astype(np.float64) + fade_in * original).astype(np.float32)
        out[first:last] = region
    return AudioBuffer(out, rate)


def attack(processed: AudioBuffer, config: PipelineConfig | None = None) -> AudioBuffer:
    """Re-run enforcement on already-processed audio.

    Identical code path to `enforce`; the name marks intent. Reversal
    without reordering is an involution, so a second pass largely
    restores the speech; with reordering enabled recovery requires the
    original permutation, which a different seed will not reproduce.
    """
    return enforce(processed, config)
