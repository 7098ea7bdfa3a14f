import { windowSchedule } from './schedule.js';
import type { RawAudio } from './wav.js';

// Stand-in feature extraction. Real deployments swap these heuristics
// for model inference; the file formats (and therefore everything the
// consumer sees) stay identical either way.

export const SPEECH_BAND_LOW_HZ = 300;
export const SPEECH_BAND_HIGH_HZ = 3400;
const SILENCE_RMS = 1e-5;

export function rms(samples: Float32Array, start = 0, end = samples.length): number {
  const n = end - start;
  if (n <= 0) {
    return 0;
  }
  let sum = 0;
  for (let i = start; i < end; i++) {
    sum += samples[i] * samples[i];
  }
  return Math.sqrt(sum / n);
}

/** Mean squared magnitude at one probe frequency (Goertzel), scaled so a
 * full-scale tone at the probe frequency reads near 1. */
export function tonePower(samples: Float32Array, sampleRate: number, freqHz: number, start = 0, end = samples.length): number {
  const n = end - start;
  if (n <= 0) {
    return 0;
  }
  const coeff = 2 * Math.cos((2 * Math.PI * freqHz) / sampleRate);
  let s1 = 0;
  let s2 = 0;
  for (let i = start; i < end; i++) {
    const s0 = samples[i] + coeff * s1 - s2;
    s2 = s1;
    s1 = s0;
  }
  const power = s1 * s1 + s2 * s2 - coeff * s1 * s2;
  return power / ((n * n) / 4);
}

/**
 * Second-order band-pass (RBJ cookbook, constant peak gain). Returns a
 * new float32 signal; the input is untouched.
 */
export function bandpass(audio: RawAudio, lowHz: number, highHz: number): Float32Array {
  if (!(lowHz > 0) || !(highHz > lowHz) || highHz >= audio.sampleRate / 2) {
    throw new Error(`bad band ${lowHz}..${highHz} Hz at ${audio.sampleRate} Hz`);
  }
  const centerHz = Math.sqrt(lowHz * highHz);
  const bandwidthOctaves = Math.log2(highHz / lowHz);
  const w0 = (2 * Math.PI * centerHz) / audio.sampleRate;
  const alpha = Math.sin(w0) * Math.sinh(((Math.LN2 / 2) * bandwidthOctaves * w0) / Math.sin(w0));

  const a0 = 1 + alpha;
  const b0 = alpha / a0;
  const b2 = -alpha / a0;
  const a1 = (-2 * Math.cos(w0)) / a0;
  const a2 = (1 - alpha) / a0;

  const out = new Float32Array(audio.samples.length);
  let z1 = 0;
  let z2 = 0;
  for (let i = 0; i < audio.samples.length; i++) {
    const x = audio.samples[i];
    const y = b0 * x + z1;
    z1 = z2 - a1 * y;
    z2 = b2 * x - a2 * y;
    out[i] = Math.fround(y);
  }
  return out;
}

/**
 * Per-window speech probabilities on the standard analysis schedule:
 * the fraction of window energy that survives a speech-band filter,
 * gated to zero for windows below the silence floor.
 */
export function speechProbabilities(
  audio: RawAudio,
  windowSeconds?: number,
  hopSeconds?: number,
): { start: number; end: number; probability: number }[] {
  const duration = audio.samples.length / audio.sampleRate;
  const schedule = windowSchedule(duration, windowSeconds, hopSeconds);
  const banded = bandpass(audio, SPEECH_BAND_LOW_HZ, SPEECH_BAND_HIGH_HZ);

  return schedule.map(({ start, end }) => {
    const first = Math.floor(start * audio.sampleRate);
    const last = Math.min(audio.samples.length, Math.round(end * audio.sampleRate));
    const total = rms(audio.samples, first, last);
    if (total < SILENCE_RMS) {
      return { start, end, probability: 0 };
    }
    const inBand = rms(banded, first, last);
    const ratio = (inBand * inBand) / (total * total);
    return { start, end, probability: Math.min(1, Math.max(0, ratio)) };
  });
}

// Probe frequency per class; crude spectral prototypes, nothing more.
export const CLASS_PROBES_HZ: Record<string, number> = {
  speech: 1000,
  engine: 90,
  jackhammer: 180,
  chainsaw: 450,
  car_horn: 700,
  siren: 1400,
  music: 2600,
  dog: 5200,
};

/** Scores in [0, 1) for the eight classes, from probe-band power. */
export function classScores(audio: RawAudio): Record<string, number> {
  const scores: Record<string, number> = {};
  for (const [name, freq] of Object.entries(CLASS_PROBES_HZ)) {
    const usable = freq < audio.sampleRate / 2 ? tonePower(audio.samples, audio.sampleRate, freq) : 0;
    scores[name] = usable / (1 + usable);
  }
  return scores;
}

/**
 * A dim-length clip embedding: log power at log-spaced probe
 * frequencies, rounded to float32 so every serialization of the same
 * clip carries bit-identical values.
 */
export function clipEmbedding(audio: RawAudio, dim: number): Float32Array {
  if (!Number.isInteger(dim) || dim < 1) {
    throw new Error('embedding dimension must be a positive integer');
  }
  const low = 100;
  const high = Math.min(12000, 0.45 * audio.sampleRate);
  const vector = new Float32Array(dim);
  for (let j = 0; j < dim; j++) {
    const t = dim === 1 ? 0 : j / (dim - 1);
    const freq = low * Math.pow(high / low, t);
    vector[j] = Math.fround(Math.log1p(1e4 * tonePower(audio.samples, audio.sampleRate, freq)));
  }
  return vector;
}
