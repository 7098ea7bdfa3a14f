import fs from 'node:fs';

export interface RawAudio {
  samples: Float32Array;
  sampleRate: number;
}

const PCM_SCALE = 32768;

/**
 * Read a 16-bit PCM or 32-bit float WAV file as mono float32.
 * Multi-channel content is averaged across channels, matching what the
 * core toolkit does, so both sides see the same signal.
 */
export function readWav(path: string): RawAudio {
  const buf = fs.readFileSync(path);
  if (buf.length < 12 || buf.toString('ascii', 0, 4) !== 'RIFF' || buf.toString('ascii', 8, 12) !== 'WAVE') {
    throw new Error(`${path}: not a RIFF/WAVE file`);
  }

  let offset = 12;
  let format = 0;
  let channels = 0;
  let sampleRate = 0;
  let bitsPerSample = 0;
  let dataStart = -1;
  let dataLength = 0;

  while (offset + 8 <= buf.length) {
    const chunkId = buf.toString('ascii', offset, offset + 4);
    const chunkSize = buf.readUInt32LE(offset + 4);
    const body = offset + 8;
    if (chunkId === 'fmt ') {
      if (chunkSize < 16 || body + 16 > buf.length) {
        throw new Error(`${path}: truncated fmt chunk`);
      }
      format = buf.readUInt16LE(body);
      channels = buf.readUInt16LE(body + 2);
      sampleRate = buf.readUInt32LE(body + 4);
      bitsPerSample = buf.readUInt16LE(body + 14);
    } else if (chunkId === 'data') {
      dataStart = body;
      dataLength = Math.min(chunkSize, buf.length - body);
    }
    // chunks are word-aligned; odd sizes carry a pad byte
    offset = body + chunkSize + (chunkSize % 2);
  }

  if (format === 0 || dataStart < 0) {
    throw new Error(`${path}: missing fmt or data chunk`);
  }
  if (channels < 1) {
    throw new Error(`${path}: no channels`);
  }

  let interleaved: Float32Array;
  if (format === 1 && bitsPerSample === 16) {
    const count = Math.floor(dataLength / 2);
    interleaved = new Float32Array(count);
    for (let i = 0; i < count; i++) {
      interleaved[i] = buf.readInt16LE(dataStart + 2 * i) / PCM_SCALE;
    }
  } else if (format === 3 && bitsPerSample === 32) {
    const count = Math.floor(dataLength / 4);
    interleaved = new Float32Array(count);
    for (let i = 0; i < count; i++) {
      interleaved[i] = buf.readFloatLE(dataStart + 4 * i);
    }
  } else {
    throw new Error(`${path}: unsupported sample format (format=${format}, bits=${bitsPerSample})`);
  }

  if (channels === 1) {
    return { samples: interleaved, sampleRate };
  }
  const frames = Math.floor(interleaved.length / channels);
  const mono = new Float32Array(frames);
  for (let i = 0; i < frames; i++) {
    let sum = 0;
    for (let c = 0; c < channels; c++) {
      sum += interleaved[i * channels + c];
    }
    mono[i] = Math.fround(sum / channels);
  }
  return { samples: mono, sampleRate };
}

/** Encode mono audio as a WAV buffer, float32 by default. */
export function encodeWav(audio: RawAudio, sampleFormat: 'float32' | 'int16' = 'float32'): Buffer {
  const n = audio.samples.length;
  const bytesPerSample = sampleFormat === 'float32' ? 4 : 2;
  const dataBytes = n * bytesPerSample;
  const buf = Buffer.alloc(44 + dataBytes);

  buf.write('RIFF', 0, 'ascii');
  buf.writeUInt32LE(36 + dataBytes, 4);
  buf.write('WAVE', 8, 'ascii');
  buf.write('fmt ', 12, 'ascii');
  buf.writeUInt32LE(16, 16);
  buf.writeUInt16LE(sampleFormat === 'float32' ? 3 : 1, 20);
  buf.writeUInt16LE(1, 22);
  buf.writeUInt32LE(audio.sampleRate, 24);
  buf.writeUInt32LE(audio.sampleRate * bytesPerSample, 28);
  buf.writeUInt16LE(bytesPerSample, 32);
  buf.writeUInt16LE(bytesPerSample * 8, 34);
  buf.write('data', 36, 'ascii');
  buf.writeUInt32LE(dataBytes, 40);

  if (sampleFormat === 'float32') {
    for (let i = 0; i < n; i++) {
      buf.writeFloatLE(audio.samples[i], 44 + 4 * i);
    }
  } else {
    for (let i = 0; i < n; i++) {
      const scaled = Math.round(audio.samples[i] * PCM_SCALE);
      buf.writeInt16LE(Math.max(-32768, Math.min(32767, scaled)), 44 + 2 * i);
    }
  }
  return buf;
}

export function writeWav(path: string, audio: RawAudio, sampleFormat: 'float32' | 'int16' = 'float32'): void {
  fs.writeFileSync(path, encodeWav(audio, sampleFormat));
}
