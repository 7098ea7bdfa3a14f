"""Evaluation metrics: WER, source-classification accuracy drop, and a
Frechet distance between embedding distributions.

All three operate on files produced elsewhere (transcripts from ASR
runs, logits from a tagger, embeddings from any fixed encoder); nothing
in here runs a model.
"""

from __future__ import annotations

import csv
import struct
import warnings
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import ValidationError

AUDIO_CLASSES = (
    "speech",
    "engine",
    "jackhammer",
    "chainsaw",
    "car_horn",
    "siren",
    "music",
    "dog",
)

DETECTION_MODES = ("mixture", "voice_free")
FAD_CONVENTIONS = ("squared", "literal")

EMBEDDING_MAGIC = b"VGEM"
EMBEDDING_VERSION = 1

LOGITS_HEADER = ("clip_id", "labels") + AUDIO_CLASSES

# Clamp tolerance for eigenvalues, relative to the largest one.
EIGENVALUE_TOLERANCE = 1e-10


# ---------------------------------------------------------------------------
# Word error rate


def normalize_text(text: str) -> tuple[str, ...]:
    """Lowercase, drop punctuation except intra-word apostrophes, split.

    Apostrophes at token edges are stripped, so quoting does not create
    distinct words while contractions survive intact.
    """
    kept = "".join(c for c in text.lower() if c.isalnum() or c == "'" or c.isspace())
    return tuple(w for w in (token.strip("'") for token in kept.split()) if w)


def _edit_distance(reference: Sequence[str], hypothesis: Sequence[str]) -> int:
    """Word-level Levenshtein distance with unit costs."""
    if not reference:
        return len(hypothesis)
    if not hypothesis:
        return len(reference)
    m = len(hypothesis)
    offsets = np.arange(1, m + 1, dtype=np.int64)
    prev = np.arange(m + 1, dtype=np.int64)
    for i, ref_word in enumerate(reference, start=1):
        cost = np.fromiter((w != ref_word for w in hypothesis), dtype=np.int64, count=m)
        best = np.minimum(prev[1:] + 1, prev[:-1] + cost)
        # Close the insertion chain cur[j] = min(best[j], cur[j-1] + 1)
        # in one vectorized pass.
        cur = np.minimum.accumulate(best - offsets) + offsets
        prev = np.concatenate(([i], cur))
    return int(prev[-1])


def wer(reference: str, hypothesis: str) -> float:
    """Word error rate as a percentage of reference words, capped at 100."""
    ref_words = normalize_text(reference)
    hyp_words = normalize_text(hypothesis)
    if not ref_words:
        raise ValidationError("reference transcript is empty after normalization")
    distance = _edit_distance(ref_words, hyp_words)
    return min(100.0, 100.0 * distance / len(ref_words))


@dataclass(frozen=True)
class WerEntry:
    clip_id: str
    system: str
    wer: float
    edits: int
    reference_words: int


@dataclass(frozen=True)
class WerReport:
    """Per-clip WERs averaged arithmetically, plus a pooled rate.

    The pooled figure divides total edits by total reference words with
    no per-clip cap, so gross misrecognitions remain visible even
    though they cannot dominate the mean.
    """

    mean_wer: float
    pooled_wer: float
    entries: tuple[WerEntry, ...]
    skipped_clips: tuple[str, ...]

    @property
    def pair_count(self) -> int:
        return len(self.entries)


def wer_report(
    references: Mapping[str, str],
    hypothesis_sets: Sequence[Mapping[str, str]],
    system_names: Sequence[str] | None = None,
) -> WerReport:
    """Score one or more hypothesis sets against shared references.

    A clip whose reference normalizes to nothing is skipped with a
    warning. A hypothesis set missing a clip is scored against the
    empty string for that clip.
    """
    if not references:
        raise ValidationError("no reference transcripts supplied")
    if not hypothesis_sets:
        raise ValidationError("no hypothesis sets supplied")
    if system_names is None:
        system_names = tuple(f"system{i + 1}" for i in range(len(hypothesis_sets)))
    elif len(system_names) != len(hypothesis_sets):
        raise ValidationError("one system name per hypothesis set required")

    normalized: dict[str, tuple[str, ...]] = {}
    skipped: list[str] = []
    for clip_id, text in references.items():
        words = normalize_text(text)
        if words:
            normalized[clip_id] = words
        else:
            skipped.append(clip_id)
    if skipped:
        warnings.warn(f"skipped {len(skipped)} clip(s) with empty references: {skipped[:5]}")
    if not normalized:
        raise ValidationError("every reference transcript is empty after normalization")

    entries: list[WerEntry] = []
    total_edits = 0
    total_words = 0
    for name, hypotheses in zip(system_names, hypothesis_sets):
        missing = [clip_id for clip_id in normalized if clip_id not in hypotheses]
        if missing:
            warnings.warn(f"{name}: no hypothesis for {len(missing)} clip(s); scoring as empty")
        for clip_id, ref_words in normalized.items():
            hyp_words = normalize_text(hypotheses.get(clip_id, ""))
            edits = _edit_distance(ref_words, hyp_words)
            capped = min(100.0, 100.0 * edits / len(ref_words))
            entries.append(WerEntry(clip_id, name, capped, edits, len(ref_words)))
            total_edits += edits
            total_words += len(ref_words)
    mean = sum(e.wer for e in entries) / len(entries)
    pooled = 100.0 * total_edits / total_words
    return WerReport(mean, pooled, tuple(entries), tuple(skipped))


def read_transcripts(path) -> dict[str, str]:
    """Read a UTF-8 TSV of `clip_id<TAB>text` lines.

    A line without a tab is a clip with an empty transcript; editors
    that trim trailing whitespace produce those legitimately.
    """
    transcripts: dict[str, str] = {}
    with open(path, encoding="utf-8") as handle:
        for number, line in enumerate(handle, start=1):
            line = line.rstrip("\n").rstrip("\r")
            if not line.strip():
                continue
            clip_id, _, text = line.partition("\t")
            if not clip_id:
                raise ValidationError(f"{path}: line {number} has no clip id")
            if clip_id in transcripts:
                raise ValidationError(f"{path}: duplicate clip id {clip_id!r} at line {number}")
            transcripts[clip_id] = text
    return transcripts


# ---------------------------------------------------------------------------
# Source classification accuracy drop


@dataclass(frozen=True)
class LogitRecord:
    """One clip's scores over the eight classes plus its true labels."""

    clip_id: str
    scores: Mapping[str, float]
    labels: frozenset[str] = field(default_factory=frozenset)

    def __post_init__(self):
        if set(self.scores) != set(AUDIO_CLASSES):
            raise ValidationError(f"{self.clip_id}: scores must cover exactly {AUDIO_CLASSES}")
        if not all(np.isfinite(v) for v in self.scores.values()):
            raise ValidationError(f"{self.clip_id}: non-finite score")
        if not self.labels:
            raise ValidationError(f"{self.clip_id}: at least one label required")
        unknown = self.labels - set(AUDIO_CLASSES)
        if unknown:
            raise ValidationError(f"{self.clip_id}: unknown labels {sorted(unknown)}")

    @property
    def has_tied_scores(self) -> bool:
        return len(set(self.scores.values())) < len(AUDIO_CLASSES)


def read_logits_csv(path) -> tuple[LogitRecord, ...]:
    records: list[LogitRecord] = []
    seen: set[str] = set()
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if header is None or tuple(header) != LOGITS_HEADER:
            raise ValidationError(f"{path}: expected header {','.join(LOGITS_HEADER)}")
        for number, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(LOGITS_HEADER):
                raise ValidationError(f"{path}: row {number} has {len(row)} fields")
            clip_id = row[0]
            if clip_id in seen:
                raise ValidationError(f"{path}: duplicate clip id {clip_id!r} at row {number}")
            seen.add(clip_id)
            labels = frozenset(part for part in row[1].split("|") if part)
            try:
                scores = {name: float(value) for name, value in zip(AUDIO_CLASSES, row[2:])}
            except ValueError as exc:
                raise ValidationError(f"{path}: row {number}: {exc}") from exc
            records.append(LogitRecord(clip_id, scores, labels))
    return tuple(records)


def rank_classes(scores: Mapping[str, float]) -> tuple[str, ...]:
    """Class names best score first; equal scores fall back to name order."""
    return tuple(sorted(AUDIO_CLASSES, key=lambda name: (-scores[name], name)))


@dataclass(frozen=True)
class Detection:
    flags: Mapping[str, bool]
    tied: bool


def detect_sources(record: LogitRecord, mode: str) -> Detection:
    """Apply the rank rule: a labeled source counts as detected when it
    ranks within the top 2 of the 8 classes for two-source mixtures, or
    top 1 for single-source clips.
    """
    if mode not in DETECTION_MODES:
        raise ValidationError(f"unknown detection mode {mode!r}; expected one of {DETECTION_MODES}")
    required = 2 if mode == "mixture" else 1
    if len(record.labels) != required:
        raise ValidationError(
            f"{record.clip_id}: {mode} mode requires exactly {required} label(s), got {len(record.labels)}"
        )
    top = set(rank_classes(record.scores)[:required])
    flags = {label: label in top for label in sorted(record.labels)}
    return Detection(flags, record.has_tied_scores)


@dataclass(frozen=True)
class ScadReport:
    scad: float
    original_accuracy: float
    processed_accuracy: float
    trial_count: int
    original_ties: int
    processed_ties: int
    mode: str


def _detection_rate(records: Iterable[LogitRecord], mode: str) -> tuple[int, int, int]:
    hits = trials = ties = 0
    for record in records:
        detection = detect_sources(record, mode)
        hits += sum(detection.flags.values())
        trials += len(detection.flags)
        ties += int(detection.tied)
    return hits, trials, ties


def scad(
    original: Sequence[LogitRecord],
    processed: Sequence[LogitRecord],
    mode: str = "mixture",
) -> ScadReport:
    """Detection accuracy on originals minus on processed clips, in
    percentage points. Each labeled source in each clip is one trial.
    """
    orig_by_id = {r.clip_id: r for r in original}
    proc_by_id = {r.clip_id: r for r in processed}
    if set(orig_by_id) != set(proc_by_id):
        missing = sorted(set(orig_by_id) ^ set(proc_by_id))
        raise ValidationError(f"clip ids differ between original and processed sets: {missing[:5]}")
    if not orig_by_id:
        raise ValidationError("no clips to score")
    for clip_id, record in orig_by_id.items():
        if record.labels != proc_by_id[clip_id].labels:
            raise ValidationError(f"{clip_id}: labels differ between original and processed records")

    orig_hits, trials, orig_ties = _detection_rate(orig_by_id.values(), mode)
    proc_hits, _, proc_ties = _detection_rate((proc_by_id[c] for c in orig_by_id), mode)
    original_accuracy = 100.0 * orig_hits / trials
    processed_accuracy = 100.0 * proc_hits / trials
    return ScadReport(
        scad=original_accuracy - processed_accuracy,
        original_accuracy=original_accuracy,
        processed_accuracy=processed_accuracy,
        trial_count=trials,
        original_ties=orig_ties,
        processed_ties=proc_ties,
        mode=mode,
    )


# ---------------------------------------------------------------------------
# Frechet distance between embedding distributions


@dataclass(frozen=True)
class EmbeddingSet:
    """n_clips x d embedding matrix, optionally with clip ids attached."""

    matrix: np.ndarray
    clip_ids: tuple[str, ...] | None = None

    def __post_init__(self):
        matrix = np.asarray(self.matrix, dtype=np.float64)
        if matrix.ndim != 2 or matrix.shape[0] < 1 or matrix.shape[1] < 1:
            raise ValidationError("embedding matrix must be 2-D and non-empty")
        if not np.all(np.isfinite(matrix)):
            raise ValidationError("embedding matrix contains non-finite values")
        if self.clip_ids is not None and len(self.clip_ids) != matrix.shape[0]:
            raise ValidationError("one clip id per embedding row required")
        object.__setattr__(self, "matrix", matrix)

    @property
    def count(self) -> int:
        return self.matrix.shape[0]

    @property
    def dimension(self) -> int:
        return self.matrix.shape[1]


def read_embeddings(path) -> EmbeddingSet:
    """Load embeddings from the binary container or its CSV fallback,
    distinguished by the 4-byte magic.
    """
    with open(path, "rb") as handle:
        magic = handle.read(4)
    if magic == EMBEDDING_MAGIC:
        return _read_embeddings_binary(path)
    return _read_embeddings_csv(path)


def _read_embeddings_binary(path) -> EmbeddingSet:
    with open(path, "rb") as handle:
        raw = handle.read()
    header = struct.calcsize("<4sIII")
    if len(raw) < header:
        raise ValidationError(f"{path}: truncated embedding header")
    magic, version, n_clips, dim = struct.unpack_from("<4sIII", raw)
    if magic != EMBEDDING_MAGIC:
        raise ValidationError(f"{path}: bad magic {magic!r}")
    if version != EMBEDDING_VERSION:
        raise ValidationError(f"{path}: unsupported version {version}")
    expected = header + 4 * n_clips * dim
    if len(raw) != expected:
        raise ValidationError(f"{path}: expected {expected} bytes, found {len(raw)}")
    matrix = np.frombuffer(raw, dtype="<f4", offset=header).reshape(n_clips, dim)
    return EmbeddingSet(matrix)


def _read_embeddings_csv(path) -> EmbeddingSet:
    rows: list[list[float]] = []
    ids: list[str] = []
    with open(path, newline="", encoding="utf-8") as handle:
        for number, row in enumerate(csv.reader(handle), start=1):
            if not row:
                continue
            try:
                values = [float(v) for v in row[1:]]
            except ValueError:
                # Tolerate a single header row naming the columns.
                if number == 1:
                    continue
                raise ValidationError(f"{path}: row {number} has non-numeric values")
            if not values:
                raise ValidationError(f"{path}: row {number} has no embedding values")
            if rows and len(values) != len(rows[0]):
                raise ValidationError(f"{path}: row {number} has {len(values)} values, expected {len(rows[0])}")
            ids.append(row[0])
            rows.append(values)
    if not rows:
        raise ValidationError(f"{path}: no embedding rows")
    return EmbeddingSet(np.array(rows, dtype=np.float64), tuple(ids))


def write_embeddings(embeddings: EmbeddingSet, path, file_format: str = "binary") -> None:
    if file_format == "binary":
        matrix = embeddings.matrix.astype("<f4")
        with open(path, "wb") as handle:
            handle.write(struct.pack("<4sIII", EMBEDDING_MAGIC, EMBEDDING_VERSION, *matrix.shape))
            handle.write(matrix.tobytes(order="C"))
    elif file_format == "csv":
        ids = embeddings.clip_ids or tuple(f"clip{i:04d}" for i in range(embeddings.count))
        with open(path, "w", newline="", encoding="utf-8") as handle:
            writer = csv.writer(handle)
            for clip_id, row in zip(ids, embeddings.matrix):
                writer.writerow([clip_id] + [repr(float(v)) for v in row])
    else:
        raise ValidationError(f"unknown embedding format {file_format!r}")


@dataclass(frozen=True)
class GaussianStats:
    """Mean and covariance summarizing one embedding distribution."""

    mean: np.ndarray
    covariance: np.ndarray

    def __post_init__(self):
        mean = np.asarray(self.mean, dtype=np.float64)
        covariance = np.asarray(self.covariance, dtype=np.float64)
        if mean.ndim != 1:
            raise ValidationError("mean must be a vector")
        if covariance.shape != (mean.size, mean.size):
            raise ValidationError("covariance must be square and match the mean dimension")
        if not (np.all(np.isfinite(mean)) and np.all(np.isfinite(covariance))):
            raise ValidationError("non-finite statistics")
        if np.max(np.abs(covariance - covariance.T), initial=0.0) > 1e-9:
            raise ValidationError("covariance is not symmetric within 1e-9")
        if float(np.linalg.eigvalsh(covariance).min()) < -1e-8:
            raise ValidationError("covariance has an eigenvalue below -1e-8")
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "covariance", covariance)

    @property
    def dimension(self) -> int:
        return self.mean.size


def gaussian_stats(embeddings: EmbeddingSet) -> GaussianStats:
    """Sample mean and covariance (denominator n-1), symmetrized."""
    n, d = embeddings.matrix.shape
    if n < 2:
        raise ValidationError("at least two embeddings required for a covariance")
    if n < d + 1:
        warnings.warn(f"{n} embeddings in {d} dimensions give a singular covariance")
    mean = embeddings.matrix.mean(axis=0)
    covariance = np.atleast_2d(np.cov(embeddings.matrix, rowvar=False, bias=False))
    return GaussianStats(mean, (covariance + covariance.T) / 2.0)


def _clamped_eigenvalues(values: np.ndarray) -> np.ndarray:
    tolerance = EIGENVALUE_TOLERANCE * max(float(values.max()), 0.0)
    return np.where(values > tolerance, values, 0.0)


def _psd_sqrt(matrix: np.ndarray) -> np.ndarray:
    values, vectors = np.linalg.eigh(matrix)
    values = _clamped_eigenvalues(values)
    return (vectors * np.sqrt(values)) @ vectors.T


def fad(ref: GaussianStats, test: GaussianStats, norm_convention: str = "squared") -> float:
    """Frechet distance between two Gaussians.

    The trace of the matrix geometric mean is computed from the
    symmetric product sqrt(Sr) St sqrt(Sr), whose eigendecomposition is
    real; eigenvalues within tolerance of zero are clamped before the
    square root. `squared` uses the squared mean distance (the standard
    definition); `literal` uses the unsquared norm.
    """
    if norm_convention not in FAD_CONVENTIONS:
        raise ValidationError(f"unknown convention {norm_convention!r}; expected one of {FAD_CONVENTIONS}")
    if ref.dimension != test.dimension:
        raise ValidationError(f"dimension mismatch: {ref.dimension} vs {test.dimension}")
    delta = ref.mean - test.mean
    if norm_convention == "squared":
        mean_term = float(delta @ delta)
    else:
        mean_term = float(np.linalg.norm(delta))
    root = _psd_sqrt(ref.covariance)
    inner = root @ test.covariance @ root
    cross = _clamped_eigenvalues(np.linalg.eigvalsh((inner + inner.T) / 2.0))
    trace_term = float(
        np.trace(ref.covariance) + np.trace(test.covariance) - 2.0 * np.sum(np.sqrt(cross))
    )
    return mean_term + trace_term
