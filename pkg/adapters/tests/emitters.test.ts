import fs from 'node:fs';
import path from 'node:path';
import { beforeAll, describe, expect, it } from 'vitest';
import {
  makeTmpDir,
  noiseClip,
  readText,
  runEmitter,
  runPython,
  runVoicemask,
  silentClip,
  toneClip,
  writeClip,
} from './helpers.js';

// End-to-end contract: everything these scripts emit must be accepted
// by the voicemask CLI, which parses with the consumer's own readers.

let dir: string;
let tone: string;
let silent: string;
let noise: string;

beforeAll(() => {
  dir = makeTmpDir();
  tone = writeClip(dir, 'tone.wav', toneClip(3));
  silent = writeClip(dir, 'silent.wav', silentClip(2));
  noise = writeClip(dir, 'noise.wav', noiseClip(2, 11));
});

describe('emitVadTrack', () => {
  it('rows sit on the consumer window grid exactly', () => {
    const track = path.join(dir, 'tone.track.csv');
    const emitted = runEmitter('emitVadTrack.js', ['--in', tone, '--out', track]);
    expect(emitted.status).toBe(0);

    const python = runPython(
      'from voicemask.vad import window_schedule\n' +
        'for s, e in window_schedule(3.0):\n' +
        '    print(f"{s:.6f},{e:.6f}")',
    );
    expect(python.status).toBe(0);
    const expected = python.stdout.trim().split('\n');
    const got = readText(track)
      .trim()
      .split('\n')
      .slice(1)
      .map((line) => line.split(',').slice(0, 2).join(','));
    expect(got).toEqual(expected);
  });

  it('drives enforce end to end in external mode', () => {
    const track = path.join(dir, 'tone2.track.csv');
    expect(runEmitter('emitVadTrack.js', ['--in', tone, '--out', track]).status).toBe(0);

    const outWav = path.join(dir, 'tone.masked.wav');
    const checked = runVoicemask([
      'enforce', '--in', tone, '--out', outWav,
      '--vad', 'external', '--vad-track', track, '--validate-only',
    ]);
    expect(checked.status).toBe(0);
    expect(fs.existsSync(outWav)).toBe(false);

    const run = runVoicemask([
      'enforce', '--in', tone, '--out', outWav,
      '--vad', 'external', '--vad-track', track, '--seed', '3',
    ]);
    expect(run.status).toBe(0);
    expect(fs.existsSync(outWav)).toBe(true);
  });

  it('keeps silent clips below the 0.3 activity threshold', () => {
    const track = path.join(dir, 'silent.track.csv');
    expect(runEmitter('emitVadTrack.js', ['--in', silent, '--out', track]).status).toBe(0);
    const probabilities = readText(track)
      .trim()
      .split('\n')
      .slice(1)
      .map((line) => Number(line.split(',')[2]));
    expect(probabilities.length).toBeGreaterThan(0);
    for (const p of probabilities) {
      expect(p).toBeLessThan(0.3);
    }
  });

  it('exits nonzero on malformed audio and leaves no partial file', () => {
    const junk = path.join(dir, 'junk.wav');
    fs.writeFileSync(junk, 'not a wav');
    const out = path.join(dir, 'junk.track.csv');
    const result = runEmitter('emitVadTrack.js', ['--in', junk, '--out', out]);
    expect(result.status).toBe(1);
    expect(result.stderr).toMatch(/RIFF/);
    expect(fs.existsSync(out)).toBe(false);
    expect(fs.readdirSync(dir).filter((name) => name.includes('.tmp-'))).toEqual([]);
  });
});

describe('emitStems', () => {
  it('speech plus residual reproduces the mixture within float rounding', () => {
    expect(runEmitter('emitStems.js', ['--in', tone]).status).toBe(0);
    const speech = path.join(dir, 'tone.speech.wav');
    const residual = path.join(dir, 'tone.residual.wav');
    expect(fs.existsSync(speech)).toBe(true);
    expect(fs.existsSync(residual)).toBe(true);

    const python = runPython(
      'import numpy as np\n' +
        'from voicemask.audio_io import read_wav\n' +
        `mix = read_wav(${JSON.stringify(tone)}).samples\n` +
        `s = read_wav(${JSON.stringify(speech)}).samples\n` +
        `r = read_wav(${JSON.stringify(residual)}).samples\n` +
        'print(float(np.max(np.abs(mix - (s + r)))))',
    );
    expect(python.status).toBe(0);
    expect(Number(python.stdout.trim())).toBeLessThan(1e-6);
  });

  it('the consumer accepts the pair in stems mode', () => {
    const outWav = path.join(dir, 'tone.stems.masked.wav');
    const run = runVoicemask([
      'enforce', '--in', tone, '--out', outWav, '--sep', 'stems',
      '--speech-stem', path.join(dir, 'tone.speech.wav'),
      '--residual-stem', path.join(dir, 'tone.residual.wav'),
      '--seed', '5',
    ]);
    expect(run.status).toBe(0);
    expect(fs.existsSync(outWav)).toBe(true);
  });

  it('honors explicit output paths', () => {
    const speech = path.join(dir, 'custom-speech.wav');
    const residual = path.join(dir, 'custom-residual.wav');
    const run = runEmitter('emitStems.js', [
      '--in', noise, '--speech-out', speech, '--residual-out', residual,
    ]);
    expect(run.status).toBe(0);
    expect(fs.existsSync(speech)).toBe(true);
    expect(fs.existsSync(residual)).toBe(true);
  });
});

describe('emitTranscripts', () => {
  it('tokens engine emits one token per active window and scores with eval wer', () => {
    const hyp = path.join(dir, 'hyp.tsv');
    expect(runEmitter('emitTranscripts.js', ['--in', tone, '--in', silent, '--out', hyp]).status).toBe(0);

    const lines = readText(hyp).split('\n');
    expect(lines[0]).toBe(`tone\t${Array(7).fill('speech').join(' ')}`);
    expect(lines[1]).toBe('silent\t');
    expect(lines[2]).toBe('');

    const ref = path.join(dir, 'ref.tsv');
    fs.writeFileSync(ref, `tone\t${Array(7).fill('speech').join(' ')}\nsilent\tquiet street\n`);
    const report = path.join(dir, 'wer.json');
    const run = runVoicemask(['eval', 'wer', '--ref', ref, '--hyp', hyp, '--out', report]);
    expect(run.status).toBe(0);
    const parsed = JSON.parse(readText(report));
    expect(parsed.metric).toBe('wer');
    expect(parsed.mean_wer).toBe(50); // tone exact, silent hypothesis empty
  });

  it('sidecar engine copies clip text and fails cleanly when missing', () => {
    fs.writeFileSync(path.join(dir, 'tone.txt'), 'ground truth words\n');
    const hyp = path.join(dir, 'sidecar.tsv');
    const ok = runEmitter('emitTranscripts.js', ['--in', tone, '--out', hyp, '--engine', 'sidecar']);
    expect(ok.status).toBe(0);
    expect(readText(hyp)).toBe('tone\tground truth words\n');

    const missing = runEmitter('emitTranscripts.js', [
      '--in', noise, '--out', path.join(dir, 'missing.tsv'), '--engine', 'sidecar',
    ]);
    expect(missing.status).toBe(1);
    expect(missing.stderr).toMatch(/sidecar not found/);
    expect(fs.existsSync(path.join(dir, 'missing.tsv'))).toBe(false);
  });
});

describe('emitLogits', () => {
  it('merges a labels file and feeds eval scad', () => {
    const labels = path.join(dir, 'labels.csv');
    fs.writeFileSync(labels, 'clip_id,labels\ntone,speech|music\nsilent,engine|siren\nnoise,dog|engine\n');

    const orig = path.join(dir, 'orig.csv');
    const proc = path.join(dir, 'proc.csv');
    const emitArgs = ['--in', tone, '--in', silent, '--in', noise, '--labels', labels];
    expect(runEmitter('emitLogits.js', [...emitArgs, '--out', orig]).status).toBe(0);
    expect(runEmitter('emitLogits.js', [...emitArgs, '--out', proc]).status).toBe(0);

    const report = path.join(dir, 'scad.json');
    const run = runVoicemask(['eval', 'scad', '--orig', orig, '--proc', proc, '--out', report]);
    expect(run.status).toBe(0);
    const parsed = JSON.parse(readText(report));
    expect(parsed.metric).toBe('scad');
    expect(parsed.scad).toBe(0); // identical files, by construction
  });

  it('defaults each clip to its top class, good enough for voice_free mode', () => {
    const logits = path.join(dir, 'voicefree.csv');
    expect(runEmitter('emitLogits.js', ['--in', tone, '--in', noise, '--out', logits]).status).toBe(0);
    const run = runVoicemask([
      'eval', 'scad', '--orig', logits, '--proc', logits, '--mode', 'voice_free',
      '--out', path.join(dir, 'scad2.json'),
    ]);
    expect(run.status).toBe(0);
  });
});

describe('emitEmbeddings', () => {
  it('binary and CSV serializations carry identical vectors', () => {
    const inputs = ['--in', tone, '--in', silent, '--in', noise];
    const binary = path.join(dir, 'set.vgem');
    const csv = path.join(dir, 'set.csv');
    expect(runEmitter('emitEmbeddings.js', [...inputs, '--out', binary, '--dim', '4']).status).toBe(0);
    expect(runEmitter('emitEmbeddings.js', [...inputs, '--out', csv, '--dim', '4']).status).toBe(0);

    const header = fs.readFileSync(binary);
    expect(header.toString('ascii', 0, 4)).toBe('VGEM');
    expect(header.readUInt32LE(4)).toBe(1);
    expect(header.readUInt32LE(8)).toBe(3);
    expect(header.readUInt32LE(12)).toBe(4);

    const report = path.join(dir, 'fad.json');
    const run = runVoicemask(['eval', 'fad', '--ref', binary, '--test', csv, '--out', report]);
    expect(run.status).toBe(0);
    const parsed = JSON.parse(readText(report));
    expect(parsed.metric).toBe('fad');
    expect(parsed.dimension).toBe(4);
    expect(parsed.fad).toBeLessThan(1e-9);
  });

  it('exits nonzero on unreadable input and writes nothing', () => {
    const out = path.join(dir, 'never.vgem');
    const run = runEmitter('emitEmbeddings.js', ['--in', path.join(dir, 'absent.wav'), '--out', out]);
    expect(run.status).toBe(1);
    expect(fs.existsSync(out)).toBe(false);
  });
});
