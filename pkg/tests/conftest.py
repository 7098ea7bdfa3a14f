"""Shared signal builders.

The RMS analysis grid at 44.1 kHz is a 1102-sample window on a
441-sample hop. Several builders place exact-zero gaps on that grid so
tests can predict cut points in closed form.
"""

import numpy as np

from voicemask import AudioBuffer

RATE = 44100
WINDOW = 1102
HOP = 441
HALF_WINDOW = WINDOW // 2


def sine(freq: float, length: int, amplitude: float = 0.5, rate: int = RATE) -> np.ndarray:
    return (amplitude * np.sin(2.0 * np.pi * freq * np.arange(length) / rate)).astype(np.float32)


def loud_silent_loud(tone_len=22050, gap_len=4410, amplitude=0.5, freq=440.0) -> AudioBuffer:
    tone = sine(freq, tone_len, amplitude)
    return AudioBuffer(np.concatenate([tone, np.zeros(gap_len, dtype=np.float32), tone]), RATE)


def speech_like(seed: int, seconds: float = 2.0, rate: int = RATE) -> AudioBuffer:
    """Amplitude-modulated low-passed noise: syllable-like bursts with dips."""
    rng = np.random.default_rng(seed)
    n = int(seconds * rate)
    voiced = np.convolve(rng.normal(0.0, 1.0, n), np.ones(8) / 8.0, mode="same")
    t = np.arange(n) / rate
    syllable_rate = rng.uniform(2.5, 5.0)
    envelope = np.clip(np.sin(2.0 * np.pi * syllable_rate * t + rng.uniform(0.0, 6.28)), 0.0, None) ** 2
    x = voiced * envelope
    return AudioBuffer((0.5 * x / np.max(np.abs(x))).astype(np.float32), rate)


def stable_clip(seed: int, n_tones: int | None = None) -> tuple[AudioBuffer, list[int]]:
    """Tone bursts separated by window-wide zero gaps on hop-aligned starts.

    Geometry pinned so cut points are reproducible through a reversal
    pass: every gap is exactly one analysis window of zeros starting on
    a hop multiple, so a single window per gap measures exact silence
    and the cut snaps to the gap's center sample, which is itself zero.
    Each resulting segment carries a half-window of zeros at both ends;
    reversal preserves that layout and all crossfade spill material is
    zero, so a second pass finds the same cuts. Tone lengths keep every
    segment above the 50 ms merge floor, and frequencies differ so
    distinct segments never carry equal content.

    Returns the clip and the expected cut points (gap center samples).
    """
    rng = np.random.default_rng(seed)
    if n_tones is None:
        n_tones = int(rng.integers(5, 9))
    freqs = 250.0 + 150.0 * rng.permutation(n_tones)
    pieces = [np.zeros(HALF_WINDOW, dtype=np.float32)]
    position = HALF_WINDOW
    cuts = []
    for i in range(n_tones):
        if i == 0:
            # first gap start = 551 + L must be a hop multiple: L = 331 (mod 441)
            length = 331 + HOP * int(rng.integers(5, 12))
        elif i < n_tones - 1:
            # later gaps start one window past the previous: L = 221 (mod 441)
            length = 221 + HOP * int(rng.integers(6, 12))
        else:
            length = int(rng.integers(2500, 5501))
        pieces.append(sine(freqs[i], length, amplitude=0.7))
        position += length
        if i < n_tones - 1:
            assert position % HOP == 0, "gap start fell off the hop grid"
            cuts.append(position + HALF_WINDOW)
            pieces.append(np.zeros(WINDOW, dtype=np.float32))
            position += WINDOW
    pieces.append(np.zeros(HALF_WINDOW, dtype=np.float32))
    return AudioBuffer(np.concatenate(pieces), RATE), cuts


def snr_db(reference, test) -> float:
    """Signal-to-noise ratio of `test` against `reference`; inf when equal.

    Accepts arrays or AudioBuffers.
    """
    reference = np.asarray(getattr(reference, "samples", reference), dtype=np.float64)
    test = np.asarray(getattr(test, "samples", test), dtype=np.float64)
    noise = float(np.sum(np.square(reference - test)))
    if noise == 0.0:
        return float("inf")
    signal = float(np.sum(np.square(reference)))
    return 10.0 * np.log10(signal / noise)
