#!/usr/bin/env node

import fs from 'node:fs';
import { parseArgs } from 'node:util';
import { invokedAsScript, runCli } from './cliMain.js';
import { classScores } from './features.js';
import { AUDIO_CLASSES, clipIdFromPath, formatLogitsCsv, writeFileAtomic, type LogitRecord } from './formats.js';
import { readWav } from './wav.js';

export interface LogitsOptions {
  inputs: string[];
  output: string;
  /** Optional `clip_id,labels` CSV assigning ground-truth labels. */
  labelsPath?: string;
}

export function readLabelsCsv(path: string): Map<string, string[]> {
  const lines = fs.readFileSync(path, 'utf-8').split(/\r?\n/);
  if ((lines[0] ?? '').trim() !== 'clip_id,labels') {
    throw new Error(`${path}: expected header clip_id,labels`);
  }
  const labels = new Map<string, string[]>();
  for (let i = 1; i < lines.length; i++) {
    const line = lines[i].trim();
    if (!line) {
      continue;
    }
    const comma = line.indexOf(',');
    if (comma <= 0) {
      throw new Error(`${path}: line ${i + 1} is not clip_id,labels`);
    }
    const clipId = line.slice(0, comma);
    const parts = line.slice(comma + 1).split('|').filter(Boolean);
    labels.set(clipId, parts);
  }
  return labels;
}

/**
 * Write classifier scores for all inputs as one logits CSV. Labels come
 * from the mapping file when given; otherwise each clip is labeled with
 * its own top-scoring class, which is only good for format smoke tests.
 */
export function emitLogits(options: LogitsOptions): number {
  const known = options.labelsPath ? readLabelsCsv(options.labelsPath) : undefined;
  const records: LogitRecord[] = options.inputs.map((input) => {
    const clipId = clipIdFromPath(input);
    const scores = classScores(readWav(input));
    const fallback = [...AUDIO_CLASSES].sort((a, b) => scores[b] - scores[a] || a.localeCompare(b))[0];
    return { clipId, labels: known?.get(clipId) ?? [fallback], scores };
  });
  writeFileAtomic(options.output, formatLogitsCsv(records));
  return records.length;
}

if (invokedAsScript(import.meta.url)) {
  const { values } = parseArgs({
    options: {
      in: { type: 'string', multiple: true },
      out: { type: 'string' },
      labels: { type: 'string' },
      help: { type: 'boolean' },
    },
  });

  if (values.help || !values.in?.length || !values.out) {
    console.error('Usage: emitLogits --in <clip.wav> [--in <clip.wav> ...] --out <logits.csv> [options]');
    console.error('');
    console.error('Options:');
    console.error('  --labels <csv>   clip_id,labels file with | separated label lists');
    console.error('  --help           print this message and exit');
    process.exit(values.help ? 0 : 1);
  }

  runCli(() => {
    const count = emitLogits({ inputs: values.in!, output: values.out!, labelsPath: values.labels });
    console.log(`Wrote ${count} clips: ${values.out}`);
  });
}
