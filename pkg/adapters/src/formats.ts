import fs from 'node:fs';
import path from 'node:path';
import { z } from 'zod';

// Column order is part of the contract; the consumer rejects anything else.
export const AUDIO_CLASSES = [
  'speech',
  'engine',
  'jackhammer',
  'chainsaw',
  'car_horn',
  'siren',
  'music',
  'dog',
] as const;

export const TRACK_HEADER = 'start_sec,end_sec,probability';
export const LOGITS_HEADER = ['clip_id', 'labels', ...AUDIO_CLASSES].join(',');

export const trackRowSchema = z
  .object({
    start: z.number().finite().nonnegative(),
    end: z.number().finite(),
    probability: z.number().min(0).max(1),
  })
  .refine((row) => row.start < row.end, { message: 'window must end after it starts' });

export type TrackRow = z.infer<typeof trackRowSchema>;

export const logitRecordSchema = z.object({
  clipId: z
    .string()
    .min(1)
    .refine((s) => !/[,\n\r]/.test(s), { message: 'clip id must be CSV-safe' }),
  labels: z.array(z.string().regex(/^[^|,\n\r]+$/)),
  scores: z.record(z.number().finite()).refine(
    (scores) => AUDIO_CLASSES.every((name) => name in scores),
    { message: `scores must cover ${AUDIO_CLASSES.join(', ')}` },
  ),
});

export type LogitRecord = z.infer<typeof logitRecordSchema>;

export const transcriptRowSchema = z.object({
  clipId: z
    .string()
    .min(1)
    .refine((s) => !/[\t\n\r]/.test(s), { message: 'clip id must be TSV-safe' }),
  text: z.string().refine((s) => !/[\n\r]/.test(s), { message: 'text must be a single line' }),
});

export type TranscriptRow = z.infer<typeof transcriptRowSchema>;

/** Write through a temp file so a failure never leaves a partial artifact. */
export function writeFileAtomic(target: string, data: Buffer | string): void {
  const tmp = `${target}.tmp-${process.pid}`;
  try {
    fs.writeFileSync(tmp, data);
    fs.renameSync(tmp, target);
  } catch (err) {
    fs.rmSync(tmp, { force: true });
    throw err;
  }
}

export function clipIdFromPath(file: string): string {
  const base = path.basename(file);
  const dot = base.lastIndexOf('.');
  return dot > 0 ? base.slice(0, dot) : base;
}

export function formatTrackCsv(rows: TrackRow[]): string {
  const lines = [TRACK_HEADER];
  for (const row of rows) {
    trackRowSchema.parse(row);
    lines.push(`${row.start.toFixed(6)},${row.end.toFixed(6)},${row.probability.toFixed(6)}`);
  }
  return lines.join('\n') + '\n';
}

export function formatLogitsCsv(records: LogitRecord[]): string {
  const lines = [LOGITS_HEADER];
  for (const record of records) {
    logitRecordSchema.parse(record);
    const scores = AUDIO_CLASSES.map((name) => String(record.scores[name]));
    lines.push([record.clipId, record.labels.join('|'), ...scores].join(','));
  }
  return lines.join('\n') + '\n';
}

export function formatTranscriptsTsv(rows: TranscriptRow[]): string {
  const seen = new Set<string>();
  const lines: string[] = [];
  for (const row of rows) {
    transcriptRowSchema.parse(row);
    if (seen.has(row.clipId)) {
      throw new Error(`duplicate clip id ${row.clipId}`);
    }
    seen.add(row.clipId);
    lines.push(`${row.clipId}\t${row.text}`);
  }
  return lines.join('\n') + '\n';
}

export const EMBEDDING_MAGIC = 'VGEM';
export const EMBEDDING_VERSION = 1;

export function encodeEmbeddingsBinary(rows: Float32Array[]): Buffer {
  const n = rows.length;
  const dim = n > 0 ? rows[0].length : 0;
  for (const row of rows) {
    if (row.length !== dim) {
      throw new Error('embedding rows must share one dimension');
    }
  }
  const buf = Buffer.alloc(16 + 4 * n * dim);
  buf.write(EMBEDDING_MAGIC, 0, 'ascii');
  buf.writeUInt32LE(EMBEDDING_VERSION, 4);
  buf.writeUInt32LE(n, 8);
  buf.writeUInt32LE(dim, 12);
  let offset = 16;
  for (const row of rows) {
    for (let j = 0; j < dim; j++) {
      buf.writeFloatLE(row[j], offset);
      offset += 4;
    }
  }
  return buf;
}

export function formatEmbeddingsCsv(ids: string[], rows: Float32Array[]): string {
  if (ids.length !== rows.length) {
    throw new Error('one id per embedding row required');
  }
  const dim = rows.length > 0 ? rows[0].length : 0;
  const header = ['clip_id', ...Array.from({ length: dim }, (_, j) => `dim_${j}`)];
  const lines = [header.join(',')];
  for (let i = 0; i < rows.length; i++) {
    if (rows[i].length !== dim) {
      throw new Error('embedding rows must share one dimension');
    }
    // String(float32 value) round-trips exactly, so CSV and binary
    // serializations of one clip carry identical numbers.
    lines.push([ids[i], ...Array.from(rows[i], (v) => String(v))].join(','));
  }
  return lines.join('\n') + '\n';
}
