import math

import numpy as np
import pytest

from voicemask import AudioBuffer, ValidationError, build_mixture, pad_or_trim
from voicemask.audio_io import rms_linear

from conftest import RATE, sine


def component_gap_db(speech, background):
    """Level difference of the two components inside the built mixture.

    Disjoint supports let each component be read back out of the sum:
    the speech occupies the first half of the padded length, the
    background the second half.
    """
    n = max(len(speech), len(background)) * 2
    speech_padded = np.zeros(n, dtype=np.float32)
    speech_padded[: len(speech)] = speech.samples
    background_padded = np.zeros(n, dtype=np.float32)
    background_padded[n // 2 : n // 2 + len(background)] = background.samples
    mixed = build_mixture(
        AudioBuffer(speech_padded, speech.sample_rate),
        AudioBuffer(background_padded, background.sample_rate),
    )
    speech_part = mixed.samples.copy()
    speech_part[n // 2 :] = 0.0
    background_part = mixed.samples.copy()
    background_part[: n // 2] = 0.0
    return 20.0 * math.log10(rms_linear(background_part) / rms_linear(speech_part)), mixed


class TestPadOrTrim:
    def test_pad(self):
        buf = AudioBuffer(np.ones(100, dtype=np.float32), RATE)
        out = pad_or_trim(buf, 1.0)
        assert len(out) == RATE
        assert out.samples[99] == 1.0
        assert out.samples[100] == 0.0

    def test_trim(self):
        buf = AudioBuffer(np.ones(2 * RATE, dtype=np.float32), RATE)
        assert len(pad_or_trim(buf, 0.5)) == RATE // 2

    def test_exact_length_copy(self):
        buf = AudioBuffer(np.ones(RATE, dtype=np.float32), RATE)
        assert np.array_equal(pad_or_trim(buf, 1.0).samples, buf.samples)

    def test_negative_duration(self):
        buf = AudioBuffer(np.ones(10, dtype=np.float32), RATE)
        with pytest.raises(ValueError):
            pad_or_trim(buf, -1.0)


class TestBuildMixture:
    def test_background_sits_six_db_above_speech(self):
        speech = AudioBuffer(sine(440.0, RATE, amplitude=0.05), RATE)
        background = AudioBuffer(sine(97.0, RATE, amplitude=0.8), RATE)
        gap, _ = component_gap_db(speech, background)
        assert gap == pytest.approx(6.0, abs=0.01)

    def test_gap_independent_of_input_levels(self):
        speech = AudioBuffer(sine(440.0, RATE, amplitude=0.7), RATE)
        background = AudioBuffer(sine(97.0, RATE, amplitude=0.001), RATE)
        gap, _ = component_gap_db(speech, background)
        assert gap == pytest.approx(6.0, abs=0.01)

    def test_peak_is_exactly_one(self):
        speech = AudioBuffer(sine(440.0, RATE, amplitude=0.3), RATE)
        background = AudioBuffer(sine(97.0, 2 * RATE, amplitude=0.4), RATE)
        mixed = build_mixture(speech, background)
        assert np.max(np.abs(mixed.samples)) == np.float32(1.0)

    def test_shorter_signal_zero_padded(self):
        speech = AudioBuffer(sine(440.0, RATE), RATE)
        background = AudioBuffer(sine(97.0, 3 * RATE), RATE)
        assert len(build_mixture(speech, background)) == 3 * RATE

    def test_silent_speech_rejected(self):
        speech = AudioBuffer(np.zeros(RATE, dtype=np.float32), RATE)
        background = AudioBuffer(sine(97.0, RATE), RATE)
        with pytest.raises(ValueError):
            build_mixture(speech, background)

    def test_silent_background_rejected(self):
        speech = AudioBuffer(sine(440.0, RATE), RATE)
        background = AudioBuffer(np.zeros(RATE, dtype=np.float32), RATE)
        with pytest.raises(ValueError):
            build_mixture(speech, background)

    def test_empty_inputs_rejected(self):
        empty = AudioBuffer(np.zeros(0, dtype=np.float32), RATE)
        with pytest.raises(ValueError):
            build_mixture(empty, empty)

    def test_rate_mismatch_rejected(self):
        speech = AudioBuffer(sine(440.0, RATE), 44100)
        background = AudioBuffer(sine(97.0, RATE), 48000)
        with pytest.raises(ValidationError):
            build_mixture(speech, background)
