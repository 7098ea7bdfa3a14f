#!/usr/bin/env node

import { parseArgs } from 'node:util';
import { invokedAsScript, runCli } from './cliMain.js';
import { clipEmbedding } from './features.js';
import { clipIdFromPath, encodeEmbeddingsBinary, formatEmbeddingsCsv, writeFileAtomic } from './formats.js';
import { readWav } from './wav.js';

export type EmbeddingsFormat = 'binary' | 'csv';

export interface EmbeddingsOptions {
  inputs: string[];
  output: string;
  dim?: number;
  /** Defaults from the output extension: .csv is CSV, anything else binary. */
  format?: EmbeddingsFormat;
}

export const DEFAULT_EMBEDDING_DIM = 8;

export function emitEmbeddings(options: EmbeddingsOptions): number {
  const dim = options.dim ?? DEFAULT_EMBEDDING_DIM;
  const format = options.format ?? (options.output.toLowerCase().endsWith('.csv') ? 'csv' : 'binary');
  const ids = options.inputs.map(clipIdFromPath);
  const rows = options.inputs.map((input) => clipEmbedding(readWav(input), dim));
  if (format === 'csv') {
    writeFileAtomic(options.output, formatEmbeddingsCsv(ids, rows));
  } else {
    writeFileAtomic(options.output, encodeEmbeddingsBinary(rows));
  }
  return rows.length;
}

if (invokedAsScript(import.meta.url)) {
  const { values } = parseArgs({
    options: {
      in: { type: 'string', multiple: true },
      out: { type: 'string' },
      dim: { type: 'string', default: String(DEFAULT_EMBEDDING_DIM) },
      format: { type: 'string' },
      help: { type: 'boolean' },
    },
  });

  if (values.help || !values.in?.length || !values.out) {
    console.error('Usage: emitEmbeddings --in <clip.wav> [--in <clip.wav> ...] --out <emb.vgem|emb.csv> [options]');
    console.error('');
    console.error('Options:');
    console.error(`  --dim <n>                embedding dimension (default: ${DEFAULT_EMBEDDING_DIM})`);
    console.error('  --format <binary|csv>    override the extension-based default');
    console.error('  --help                   print this message and exit');
    process.exit(values.help ? 0 : 1);
  }
  if (values.format !== undefined && values.format !== 'binary' && values.format !== 'csv') {
    console.error(`Error: unknown format ${values.format}`);
    process.exit(1);
  }

  runCli(() => {
    const dim = Number(values.dim);
    if (!Number.isInteger(dim) || dim < 1) {
      throw new Error(`--dim must be a positive integer, got ${values.dim}`);
    }
    const count = emitEmbeddings({
      inputs: values.in!,
      output: values.out!,
      dim,
      format: values.format as EmbeddingsFormat | undefined,
    });
    console.log(`Wrote ${count} embeddings: ${values.out}`);
  });
}
