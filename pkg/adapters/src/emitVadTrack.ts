#!/usr/bin/env node

import { parseArgs } from 'node:util';
import { invokedAsScript, runCli } from './cliMain.js';
import { speechProbabilities } from './features.js';
import { formatTrackCsv, writeFileAtomic } from './formats.js';
import { DEFAULT_HOP_SECONDS, DEFAULT_WINDOW_SECONDS } from './schedule.js';
import { readWav } from './wav.js';

export interface VadTrackOptions {
  input: string;
  output: string;
  windowSeconds?: number;
  hopSeconds?: number;
}

/** Analyze one clip and write its speech-probability track CSV. */
export function emitVadTrack(options: VadTrackOptions): number {
  const audio = readWav(options.input);
  const rows = speechProbabilities(audio, options.windowSeconds, options.hopSeconds);
  writeFileAtomic(options.output, formatTrackCsv(rows));
  return rows.length;
}

if (invokedAsScript(import.meta.url)) {
  const { values } = parseArgs({
    options: {
      in: { type: 'string' },
      out: { type: 'string' },
      window: { type: 'string', default: String(DEFAULT_WINDOW_SECONDS) },
      hop: { type: 'string', default: String(DEFAULT_HOP_SECONDS) },
      help: { type: 'boolean' },
    },
  });

  if (values.help || !values.in || !values.out) {
    console.error('Usage: emitVadTrack --in <clip.wav> --out <track.csv> [options]');
    console.error('');
    console.error('Options:');
    console.error(`  --window <sec>   analysis window length (default: ${DEFAULT_WINDOW_SECONDS})`);
    console.error(`  --hop <sec>      analysis hop (default: ${DEFAULT_HOP_SECONDS})`);
    console.error('  --help           print this message and exit');
    process.exit(values.help ? 0 : 1);
  }

  runCli(() => {
    const rows = emitVadTrack({
      input: values.in!,
      output: values.out!,
      windowSeconds: Number(values.window),
      hopSeconds: Number(values.hop),
    });
    console.log(`Wrote ${rows} windows: ${values.out}`);
  });
}
