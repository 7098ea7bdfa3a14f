import { spawnSync, type SpawnSyncReturns } from 'node:child_process';
import fs from 'node:fs';
import os from 'node:os';
import path from 'node:path';
import { fileURLToPath } from 'node:url';
import { writeWav, type RawAudio } from '../src/wav.js';

const DIST = fileURLToPath(new URL('../dist', import.meta.url));

export function makeTmpDir(): string {
  return fs.mkdtempSync(path.join(os.tmpdir(), 'adapters-'));
}

export function runEmitter(script: string, args: string[]): SpawnSyncReturns<string> {
  return spawnSync('node', [path.join(DIST, script), ...args], { encoding: 'utf-8' });
}

export function runVoicemask(args: string[]): SpawnSyncReturns<string> {
  return spawnSync('voicemask', args, { encoding: 'utf-8' });
}

export function runPython(code: string): SpawnSyncReturns<string> {
  return spawnSync('python3', ['-c', code], { encoding: 'utf-8' });
}

/** Amplitude-modulated tone; reads as strongly speech-band content. */
export function toneClip(seconds: number, rate = 44100): RawAudio {
  const samples = new Float32Array(Math.round(seconds * rate));
  for (let i = 0; i < samples.length; i++) {
    const t = i / rate;
    samples[i] = Math.fround(0.4 * Math.sin(2 * Math.PI * 1000 * t) * (0.6 + 0.4 * Math.sin(2 * Math.PI * 4 * t)));
  }
  return { samples, sampleRate: rate };
}

export function silentClip(seconds: number, rate = 44100): RawAudio {
  return { samples: new Float32Array(Math.round(seconds * rate)), sampleRate: rate };
}

/** Deterministic wideband noise (mulberry32; no Math.random in tests). */
export function noiseClip(seconds: number, seed: number, rate = 44100): RawAudio {
  let state = seed >>> 0;
  const next = () => {
    state = (state + 0x6d2b79f5) >>> 0;
    let t = state;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
  const samples = new Float32Array(Math.round(seconds * rate));
  for (let i = 0; i < samples.length; i++) {
    samples[i] = Math.fround(0.3 * (2 * next() - 1));
  }
  return { samples, sampleRate: rate };
}

export function writeClip(dir: string, name: string, audio: RawAudio): string {
  const file = path.join(dir, name);
  writeWav(file, audio);
  return file;
}

export function readText(file: string): string {
  return fs.readFileSync(file, 'utf-8');
}
