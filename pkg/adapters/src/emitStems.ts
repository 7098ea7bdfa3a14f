#!/usr/bin/env node

import { parseArgs } from 'node:util';
import { invokedAsScript, runCli } from './cliMain.js';
import { bandpass, SPEECH_BAND_HIGH_HZ, SPEECH_BAND_LOW_HZ } from './features.js';
import { writeFileAtomic } from './formats.js';
import { encodeWav, readWav } from './wav.js';

export interface StemsOptions {
  input: string;
  speechOut?: string;
  residualOut?: string;
}

function defaultStemPath(input: string, kind: 'speech' | 'residual'): string {
  const stripped = input.replace(/\.wav$/i, '');
  return `${stripped}.${kind}.wav`;
}

/**
 * Split one clip into a speech stem and a residual. The residual is
 * computed as input minus speech sample-for-sample, so the pair sums
 * back to the mixture up to float32 rounding; the consumer checks that
 * additivity on load.
 */
export function emitStems(options: StemsOptions): { speechPath: string; residualPath: string } {
  const audio = readWav(options.input);
  const speech = bandpass(audio, SPEECH_BAND_LOW_HZ, SPEECH_BAND_HIGH_HZ);
  const residual = new Float32Array(audio.samples.length);
  for (let i = 0; i < residual.length; i++) {
    residual[i] = Math.fround(audio.samples[i] - speech[i]);
  }

  const speechPath = options.speechOut ?? defaultStemPath(options.input, 'speech');
  const residualPath = options.residualOut ?? defaultStemPath(options.input, 'residual');
  writeFileAtomic(speechPath, encodeWav({ samples: speech, sampleRate: audio.sampleRate }));
  writeFileAtomic(residualPath, encodeWav({ samples: residual, sampleRate: audio.sampleRate }));
  return { speechPath, residualPath };
}

if (invokedAsScript(import.meta.url)) {
  const { values } = parseArgs({
    options: {
      in: { type: 'string' },
      'speech-out': { type: 'string' },
      'residual-out': { type: 'string' },
      help: { type: 'boolean' },
    },
  });

  if (values.help || !values.in) {
    console.error('Usage: emitStems --in <clip.wav> [options]');
    console.error('');
    console.error('Options:');
    console.error('  --speech-out <wav>     speech stem path (default: <clip>.speech.wav)');
    console.error('  --residual-out <wav>   residual path (default: <clip>.residual.wav)');
    console.error('  --help                 print this message and exit');
    process.exit(values.help ? 0 : 1);
  }

  runCli(() => {
    const { speechPath, residualPath } = emitStems({
      input: values.in!,
      speechOut: values['speech-out'],
      residualOut: values['residual-out'],
    });
    console.log(`Wrote: ${speechPath}`);
    console.log(`Wrote: ${residualPath}`);
  });
}
