"""Batch toolkit that renders speech in environmental recordings
unintelligible while preserving the acoustic scene, plus the metrics
used to evaluate that trade-off."""

from .audio_io import AudioBuffer, peak_normalize, read_wav, rms, write_wav
from .errors import AudioFormatError, ClippingWarning, ValidationError
from .fragmentation import (
    FragmentationParams,
    Roi,
    RmsProfile,
    Segmentation,
    compute_rms_profile,
    find_rois,
    fragment,
)
from .metrics import (
    AUDIO_CLASSES,
    EmbeddingSet,
    GaussianStats,
    LogitRecord,
    ScadReport,
    WerReport,
    detect_sources,
    fad,
    gaussian_stats,
    read_embeddings,
    read_logits_csv,
    read_transcripts,
    scad,
    wer,
    wer_report,
    write_embeddings,
)
from .mixture import build_mixture, pad_or_trim
from .pipeline import PipelineConfig, attack, enforce, white_noise_baseline
from .scramble import (
    Permutation,
    ScrambleParams,
    constrained_shuffle,
    reverse_segment,
    scramble,
    scramble_frame,
    texture_frame_bounds,
)
from .separation import StemPair, default_stem_paths, identity_stems, load_stems, remix
from .vad import (
    ActiveRegions,
    SpeechRegionTrack,
    TrackEntry,
    detect,
    merge_intervals,
    pad_regions,
    threshold_track,
    window_schedule,
)

__version__ = "0.1.0"

__all__ = [
    "AUDIO_CLASSES",
    "ActiveRegions",
    "AudioBuffer",
    "AudioFormatError",
    "ClippingWarning",
    "EmbeddingSet",
    "FragmentationParams",
    "GaussianStats",
    "LogitRecord",
    "Permutation",
    "PipelineConfig",
    "RmsProfile",
    "Roi",
    "ScadReport",
    "ScrambleParams",
    "Segmentation",
    "SpeechRegionTrack",
    "StemPair",
    "TrackEntry",
    "ValidationError",
    "WerReport",
    "attack",
    "build_mixture",
    "compute_rms_profile",
    "constrained_shuffle",
    "default_stem_paths",
    "detect",
    "detect_sources",
    "enforce",
    "fad",
    "find_rois",
    "fragment",
    "gaussian_stats",
    "identity_stems",
    "load_stems",
    "merge_intervals",
    "pad_or_trim",
    "pad_regions",
    "peak_normalize",
    "read_embeddings",
    "read_logits_csv",
    "read_transcripts",
    "read_wav",
    "remix",
    "reverse_segment",
    "rms",
    "scad",
    "scramble",
    "scramble_frame",
    "texture_frame_bounds",
    "threshold_track",
    "wer",
    "wer_report",
    "white_noise_baseline",
    "window_schedule",
    "write_embeddings",
    "write_wav",
]
