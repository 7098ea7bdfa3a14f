#!/usr/bin/env node

import fs from 'node:fs';
import path from 'node:path';
import { parseArgs } from 'node:util';
import { invokedAsScript, runCli } from './cliMain.js';
import { speechProbabilities } from './features.js';
import { clipIdFromPath, formatTranscriptsTsv, writeFileAtomic, type TranscriptRow } from './formats.js';
import { readWav } from './wav.js';

export type TranscriptEngine = 'tokens' | 'sidecar';

export interface TranscriptsOptions {
  inputs: string[];
  output: string;
  engine?: TranscriptEngine;
}

const ACTIVITY_THRESHOLD = 0.3;

function tokensHypothesis(input: string): string {
  const audio = readWav(input);
  const active = speechProbabilities(audio).filter((row) => row.probability >= ACTIVITY_THRESHOLD);
  return active.map(() => 'speech').join(' ');
}

function sidecarHypothesis(input: string): string {
  const sidecar = path.join(path.dirname(input), `${clipIdFromPath(input)}.txt`);
  if (!fs.existsSync(sidecar)) {
    throw new Error(`transcript sidecar not found: ${sidecar}`);
  }
  return fs.readFileSync(sidecar, 'utf-8').replace(/\s+/g, ' ').trim();
}

/**
 * Write one hypothesis TSV covering all inputs. The `tokens` engine is
 * the no-model fallback (one "speech" token per active analysis
 * window); `sidecar` copies `<clip>.txt` found beside each input.
 */
export function emitTranscripts(options: TranscriptsOptions): number {
  const engine = options.engine ?? 'tokens';
  const rows: TranscriptRow[] = options.inputs.map((input) => ({
    clipId: clipIdFromPath(input),
    text: engine === 'sidecar' ? sidecarHypothesis(input) : tokensHypothesis(input),
  }));
  writeFileAtomic(options.output, formatTranscriptsTsv(rows));
  return rows.length;
}

if (invokedAsScript(import.meta.url)) {
  const { values } = parseArgs({
    options: {
      in: { type: 'string', multiple: true },
      out: { type: 'string' },
      engine: { type: 'string', default: 'tokens' },
      help: { type: 'boolean' },
    },
  });

  if (values.help || !values.in?.length || !values.out) {
    console.error('Usage: emitTranscripts --in <clip.wav> [--in <clip.wav> ...] --out <hyp.tsv> [options]');
    console.error('');
    console.error('Options:');
    console.error('  --engine <tokens|sidecar>   hypothesis source (default: tokens)');
    console.error('  --help                      print this message and exit');
    process.exit(values.help ? 0 : 1);
  }
  if (values.engine !== 'tokens' && values.engine !== 'sidecar') {
    console.error(`Error: unknown engine ${values.engine}`);
    process.exit(1);
  }

  runCli(() => {
    const count = emitTranscripts({
      inputs: values.in!,
      output: values.out!,
      engine: values.engine as TranscriptEngine,
    });
    console.log(`Wrote ${count} transcripts: ${values.out}`);
  });
}
