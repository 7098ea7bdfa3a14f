import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from voicemask import (
    ActiveRegions,
    AudioBuffer,
    SpeechRegionTrack,
    TrackEntry,
    ValidationError,
    detect,
    merge_intervals,
    pad_regions,
    threshold_track,
    window_schedule,
)

from conftest import RATE, sine


class TestWindowSchedule:
    def test_one_second_default_grid(self):
        schedule = window_schedule(1.0)
        assert len(schedule) == 3
        assert [s for s, _ in schedule] == pytest.approx([0.0, 0.44, 0.88])
        assert schedule[0][1] == pytest.approx(0.5)
        assert schedule[1][1] == pytest.approx(0.94)
        assert schedule[2][1] == pytest.approx(1.0)

    def test_clip_shorter_than_window(self):
        assert window_schedule(0.3) == [(0.0, 0.3)]

    def test_zero_duration(self):
        assert window_schedule(0.0) == []

    def test_invalid_arguments(self):
        with pytest.raises(ValueError):
            window_schedule(-1.0)
        with pytest.raises(ValueError):
            window_schedule(1.0, window_seconds=0.0)
        with pytest.raises(ValueError):
            window_schedule(1.0, hop_seconds=-0.1)

    @settings(max_examples=50, deadline=None)
    @given(st.floats(0.01, 30.0), st.floats(0.1, 1.0), st.floats(0.1, 0.9))
    def test_schedule_covers_clip(self, duration, window, hop_fraction):
        # overlapped grids (hop <= window) leave no uncovered tail
        hop = window * hop_fraction
        schedule = window_schedule(duration, window, hop)
        assert schedule[0][0] == 0.0
        assert schedule[-1][1] == duration
        for k, (start, end) in enumerate(schedule):
            assert start == k * hop
            assert end == min(start + window, duration)


class TestTrackEntry:
    def test_window_must_be_forward(self):
        with pytest.raises(ValidationError):
            TrackEntry(1.0, 1.0, 0.5)
        with pytest.raises(ValidationError):
            TrackEntry(-0.1, 1.0, 0.5)

    def test_probability_range(self):
        with pytest.raises(ValidationError):
            TrackEntry(0.0, 1.0, 1.5)
        with pytest.raises(ValidationError):
            TrackEntry(0.0, 1.0, -0.1)


class TestSpeechRegionTrack:
    def test_entries_must_be_chronological(self):
        with pytest.raises(ValidationError):
            SpeechRegionTrack((TrackEntry(1.0, 2.0, 0.5), TrackEntry(0.0, 1.0, 0.5)))

    def test_csv_round_trip(self, tmp_path):
        track = SpeechRegionTrack(
            (TrackEntry(0.0, 0.5, 0.25), TrackEntry(0.44, 0.94, 0.75))
        )
        path = tmp_path / "track.csv"
        track.write_csv(path)
        assert SpeechRegionTrack.read_csv(path) == track

    def test_read_rejects_empty_file(self, tmp_path):
        path = tmp_path / "track.csv"
        path.write_text("")
        with pytest.raises(ValidationError):
            SpeechRegionTrack.read_csv(path)

    def test_read_rejects_wrong_header(self, tmp_path):
        path = tmp_path / "track.csv"
        path.write_text("begin,end,prob\n0,1,0.5\n")
        with pytest.raises(ValidationError):
            SpeechRegionTrack.read_csv(path)

    def test_read_rejects_short_row(self, tmp_path):
        path = tmp_path / "track.csv"
        path.write_text("start_sec,end_sec,probability\n0,1\n")
        with pytest.raises(ValidationError):
            SpeechRegionTrack.read_csv(path)

    def test_read_rejects_non_numeric(self, tmp_path):
        path = tmp_path / "track.csv"
        path.write_text("start_sec,end_sec,probability\n0,one,0.5\n")
        with pytest.raises(ValidationError):
            SpeechRegionTrack.read_csv(path)

    def test_blank_lines_skipped(self, tmp_path):
        path = tmp_path / "track.csv"
        path.write_text("start_sec,end_sec,probability\n0,1,0.5\n\n")
        assert len(SpeechRegionTrack.read_csv(path).entries) == 1


class TestActiveRegions:
    def test_rejects_empty_interval(self):
        with pytest.raises(ValidationError):
            ActiveRegions(((1.0, 1.0),))

    def test_rejects_overlap(self):
        with pytest.raises(ValidationError):
            ActiveRegions(((0.0, 2.0), (1.0, 3.0)))

    def test_total_duration_and_bool(self):
        regions = ActiveRegions(((0.0, 1.0), (2.0, 2.5)))
        assert regions.total_duration == pytest.approx(1.5)
        assert regions
        assert not ActiveRegions(())


class TestMergeIntervals:
    def test_gap_at_threshold_merges(self):
        # dyadic endpoints keep the gap comparison exact
        assert merge_intervals([(0.0, 1.0), (1.125, 2.0)], 0.125) == ((0.0, 2.0),)

    def test_gap_above_threshold_kept(self):
        assert merge_intervals([(0.0, 1.0), (1.2, 2.0)], 0.1) == ((0.0, 1.0), (1.2, 2.0))

    def test_overlapping_union(self):
        assert merge_intervals([(1.0, 3.0), (0.0, 2.0)]) == ((0.0, 3.0),)

    def test_containment(self):
        assert merge_intervals([(0.0, 5.0), (1.0, 2.0)]) == ((0.0, 5.0),)

    def test_empty(self):
        assert merge_intervals([]) == ()


class TestThresholdTrack:
    def track(self):
        return SpeechRegionTrack(
            (
                TrackEntry(0.0, 0.5, 0.9),
                TrackEntry(0.44, 0.94, 0.1),
                TrackEntry(0.88, 1.38, 0.8),
            )
        )

    def test_isolated_windows(self):
        regions = threshold_track(self.track(), threshold=0.3, merge_gap=0.1)
        assert regions.intervals == ((0.0, 0.5), (0.88, 1.38))

    def test_wide_gap_bridged(self):
        regions = threshold_track(self.track(), threshold=0.3, merge_gap=0.5)
        assert regions.intervals == ((0.0, 1.38),)

    def test_threshold_is_inclusive(self):
        track = SpeechRegionTrack((TrackEntry(0.0, 0.5, 0.3),))
        assert threshold_track(track, threshold=0.3).intervals == ((0.0, 0.5),)

    def test_nothing_above_threshold(self):
        assert threshold_track(self.track(), threshold=0.95).intervals == ()


class TestPadRegions:
    def test_pad_clips_to_clip_bounds(self):
        regions = ActiveRegions(((0.05, 1.0), (9.5, 9.95)))
        padded = pad_regions(regions, 0.1, 10.0)
        assert padded.intervals == ((0.0, 1.1), (9.4, 10.0))

    def test_pad_merges_neighbors(self):
        regions = ActiveRegions(((0.0, 1.0), (1.1, 2.0)))
        assert pad_regions(regions, 0.1, 10.0).intervals == ((0.0, 2.1),)


class TestDetect:
    def test_always_marks_whole_clip(self):
        buf = AudioBuffer(np.zeros(RATE, dtype=np.float32), RATE)
        assert detect(buf, "always").intervals == ((0.0, 1.0),)

    def test_always_empty_clip(self):
        buf = AudioBuffer(np.zeros(0, dtype=np.float32), RATE)
        assert detect(buf, "always").intervals == ()

    def test_external_requires_track(self):
        buf = AudioBuffer(np.zeros(RATE, dtype=np.float32), RATE)
        with pytest.raises(ValidationError):
            detect(buf, "external")

    def test_external_thresholds_and_pads(self):
        buf = AudioBuffer(np.zeros(10 * RATE, dtype=np.float32), RATE)
        track = SpeechRegionTrack((TrackEntry(1.0, 2.0, 0.9), TrackEntry(5.0, 6.0, 0.05)))
        regions = detect(buf, "external", track=track, threshold=0.3, pad_seconds=0.1)
        assert regions.intervals == ((0.9, 2.1),)

    def test_energy_finds_loud_burst(self):
        samples = np.full(3 * RATE, 0.001, dtype=np.float32)
        samples[RATE : 2 * RATE] = sine(440.0, RATE)
        regions = detect(AudioBuffer(samples, RATE), "energy")
        assert len(regions.intervals) == 1
        start, end = regions.intervals[0]
        # active windows start at 0.88 and the last begins at 1.76,
        # padded by the default 0.1 s on each side
        assert start == pytest.approx(0.78)
        assert end == pytest.approx(2.36)

    def test_energy_silence_yields_nothing(self):
        buf = AudioBuffer(np.zeros(2 * RATE, dtype=np.float32), RATE)
        assert detect(buf, "energy").intervals == ()

    def test_energy_constant_background_yields_nothing(self):
        buf = AudioBuffer(sine(300.0, 3 * RATE), RATE)
        assert detect(buf, "energy").intervals == ()

    def test_unknown_mode(self):
        buf = AudioBuffer(np.zeros(RATE, dtype=np.float32), RATE)
        with pytest.raises(ValidationError):
            detect(buf, "bogus")

    @settings(max_examples=30, deadline=None)
    @given(st.lists(st.floats(0.0, 1.0), min_size=1, max_size=20), st.floats(0.0, 1.0))
    def test_lower_threshold_never_shrinks_coverage(self, probabilities, threshold):
        entries = tuple(
            TrackEntry(k * 0.44, k * 0.44 + 0.5, p) for k, p in enumerate(probabilities)
        )
        buf = AudioBuffer(np.zeros(30 * RATE, dtype=np.float32), RATE)
        track = SpeechRegionTrack(entries)
        loose = detect(buf, "external", track=track, threshold=threshold / 2)
        tight = detect(buf, "external", track=track, threshold=threshold)
        assert loose.total_duration >= tight.total_duration - 1e-9
