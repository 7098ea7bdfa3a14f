"""Segment scrambling: per-segment reversal and constrained reordering.

The buffer is partitioned into consecutive texture frames (2 s by
default, final frame possibly shorter). Each frame is fragmented at
low-energy zero crossings, the samples inside every segment are
reversed, and optionally the segments are reordered by a random
permutation constrained to never place two originally adjacent segments
back in their original adjacency. Reversal alone is an involution, so a
second application largely restores the input; reordering breaks that
property, which is the point of enabling it.

Joins are overlap-added: each segment's source window is extended by o
samples per side before reversal, where o is 5% of the shorter adjacent
segment, so the crossfade zone of 2*o samples carries genuine
neighboring content and the output keeps the input length exactly.
Extensions clamp at frame edges, shrinking the affected zone rather
than inventing material. Texture frames rejoin the same way: each
frame's source window is extended into its neighbors before processing
and the frame-level zones crossfade between the two processed versions
of the shared material.
"""

from __future__ import annotations

import secrets
from dataclasses import dataclass, replace

import numpy as np

from .audio_io import AudioBuffer
from .fragmentation import FragmentationParams, Segmentation, fragment

_REJECTION_CAP = 10_000


@dataclass(frozen=True)
class ScrambleParams:
    """Scrambling configuration.

    `seed` of None means "draw from system entropy at use time"; pass an
    explicit value for reproducible output. At least one of `reverse`
    and `reorder` should stay enabled for any privacy-enforcing use;
    both off turns the operation into an identity and is only useful for
    plumbing tests.
    """

    texture_frame_seconds: float = 2.0
    overlap_fraction: float = 0.05
    reverse: bool = True
    reorder: bool = False
    seed: int | None = None

    def __post_init__(self):
        if self.texture_frame_seconds <= 0:
            raise ValueError("texture_frame_seconds must be positive")
        if not 0.0 <= self.overlap_fraction < 0.5:
            raise ValueError("overlap_fraction must lie in [0, 0.5)")
        if self.seed is not None and not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit non-negative integer")


@dataclass(frozen=True)
class Permutation:
    """Segment order for one frame; order[p] is the source index of output slot p."""

    order: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.order) != list(range(len(self.order))):
            raise ValueError(f"not a permutation: {self.order}")


def reverse_segment(segment: np.ndarray) -> np.ndarray:
    """Samples of one segment in reversed order."""
    return np.asarray(segment)[::-1].copy()


def _reconnects(order) -> bool:
    return any(order[p + 1] == order[p] + 1 for p in range(len(order) - 1))


def constrained_shuffle(n: int, seed: int) -> Permutation:
    """Uniform random permutation of n segments avoiding original adjacencies.

    No output slot pair (p, p+1) may hold source segments (s, s+1): that
    junction already existed and reordering across it would be
    inaudible. Sampling is by rejection, capped; after the cap the
    deterministic full reversal (valid for any n >= 2) is used. n == 1
    has no alternative ordering and yields the identity.
    """
    if n < 1:
        raise ValueError("need at least one segment")
    if n == 1:
        return Permutation((0,))
    rng = np.random.default_rng(seed)
    for _ in range(_REJECTION_CAP):
        candidate = tuple(int(i) for i in rng.permutation(n))
        if not _reconnects(candidate):
            return Permutation(candidate)
    return Permutation(tuple(range(n - 1, -1, -1)))


def _resolve_seed(seed: int | None) -> int:
    if seed is None:
        return secrets.randbits(63)
    return seed


def _derive_seed(seed: int, index: int) -> int:
    """Independent per-frame stream identified by (seed, frame index)."""
    return int(np.random.SeedSequence([seed, index]).generate_state(1, dtype=np.uint64)[0])


def _join_with_crossfades(contents, pres, posts, body_lengths) -> np.ndarray:
    """Place bodies consecutively and linearly crossfade each junction.

    contents[p] is pre + body + post samples; pres[p] equals posts[p-1],
    the half-width of the shared junction zone. Samples outside the
    zones are copied bit-exactly; inside a zone of 2*h samples the two
    sides blend with complementary linear gains.
    """
    starts = np.concatenate(([0], np.cumsum(body_lengths)))
    out = np.empty(int(starts[-1]), dtype=np.float32)
    m = len(contents)
    for p in range(m):
        h_left, h_right = pres[p], posts[p]
        body = contents[p][pres[p] : pres[p] + body_lengths[p]]
        out[starts[p] + h_left : starts[p + 1] - h_right] = body[h_left : body_lengths[p] - h_right]
    for j in range(1, m):
        h = pres[j]
        if h == 0:
            continue
        left = contents[j - 1][-2 * h :].astype(np.float64)
        right = contents[j][: 2 * h].astype(np.float64)
        fade_in = np.arange(1, 2 * h + 1, dtype=np.float64) / (2 * h + 1)
        out[starts[j] - h : starts[j] + h] = ((1.0 - fade_in) * left + fade_in * right).astype(np.float32)
    return out


def scramble_frame(frame: AudioBuffer, segmentation: Segmentation, params: ScrambleParams) -> AudioBuffer:
    """Scramble one texture frame given its segmentation.

    Output slot p receives source segment order[p], reversed when
    `reverse` is on. The reversed body occupies exactly its slot, so
    outside crossfade zones the output is the piecewise-reversed (and
    reordered) input sample for sample. With reversal, the material
    continuing a slot past a junction is the reversed extension beyond
    the segment's far edge; without reversal it is the plain extension
    past the near edge. Where a source segment touches a frame edge the
    extension is clamped and the affected zone shrinks.
    """
    x = frame.samples
    n = len(frame)
    if segmentation.n_samples != n:
        raise ValueError(f"segmentation covers {segmentation.n_samples} samples, frame has {n}")
    bounds = segmentation.bounds()
    m = len(bounds) - 1
    if params.reorder:
        order = constrained_shuffle(m, _resolve_seed(params.seed)).order
    else:
        order = tuple(range(m))
    sources = [(bounds[s], bounds[s + 1]) for s in order]
    lengths = [e - a for a, e in sources]

    half_widths = [0] * (m + 1)
    for j in range(1, m):
        nominal = int(params.overlap_fraction * min(lengths[j - 1], lengths[j]))
        a_left, e_left = sources[j - 1]
        a_right, e_right = sources[j]
        if params.reverse:
            post_available = a_left
            pre_available = n - e_right
        else:
            post_available = n - e_left
            pre_available = a_right
        half_widths[j] = max(0, min(nominal, post_available, pre_available))

    contents = []
    for p in range(m):
        a, e = sources[p]
        pre, post = half_widths[p], half_widths[p + 1]
        if params.reverse:
            contents.append(x[a - post : e + pre][::-1])
        else:
            contents.append(x[a - pre : e + post])
    out = _join_with_crossfades(contents, half_widths[:m], half_widths[1:], lengths)
    return AudioBuffer(out, frame.sample_rate)


def texture_frame_bounds(n_samples: int, sample_rate: int, frame_seconds: float) -> tuple[int, ...]:
    """Sample boundaries of the consecutive texture frames covering a buffer."""
    frame_length = int(round(frame_seconds * sample_rate))
    if frame_length <= 0:
        raise ValueError("texture frame must span at least one sample")
    if n_samples <= 0:
        raise ValueError("need at least one sample")
    bounds = list(range(0, n_samples, frame_length))
    bounds.append(n_samples)
    return tuple(bounds)


def scramble(
    buffer: AudioBuffer,
    params: ScrambleParams | None = None,
    frag_params: FragmentationParams | None = None,
) -> AudioBuffer:
    """Scramble a whole buffer frame by frame.

    Each texture frame is extended into its neighbors by the frame-level
    overlap, fragmented, and scrambled as a unit; frames then rejoin
    with the same crossfade used between segments, blending the two
    processed versions of the shared material. Per-frame randomness
    comes from independent streams derived from (seed, frame index), so
    equal seeds reproduce output bit for bit.
    """
    params = params or ScrambleParams()
    frag_params = frag_params or FragmentationParams()
    n = len(buffer)
    if n == 0:
        return AudioBuffer(buffer.samples.copy(), buffer.sample_rate)
    bounds = texture_frame_bounds(n, buffer.sample_rate, params.texture_frame_seconds)
    count = len(bounds) - 1
    seed = _resolve_seed(params.seed)
    frame_lengths = [bounds[k + 1] - bounds[k] for k in range(count)]

    half_widths = [0] * (count + 1)
    for k in range(1, count):
        half_widths[k] = int(params.overlap_fraction * min(frame_lengths[k - 1], frame_lengths[k]))

    contents = []
    for k in range(count):
        pre, post = half_widths[k], half_widths[k + 1]
        window = AudioBuffer(buffer.samples[bounds[k] - pre : bounds[k + 1] + post], buffer.sample_rate)
        segmentation = fragment(window, frag_params)
        frame_params = replace(params, seed=_derive_seed(seed, k))
        contents.append(scramble_frame(window, segmentation, frame_params).samples)
    out = _join_with_crossfades(contents, half_widths[:count], half_widths[1:], frame_lengths)
    return AudioBuffer(out, buffer.sample_rate)
