export const DEFAULT_WINDOW_SECONDS = 0.5;
export const DEFAULT_HOP_SECONDS = 0.44;

export interface AnalysisWindow {
  start: number;
  end: number;
}

/**
 * Analysis windows covering `duration` seconds: window k starts at
 * k * hop for every start strictly inside the clip, and the final
 * window truncates at the clip end.
 *
 * This must stay arithmetic-identical to the consumer's schedule (same
 * IEEE doubles, same comparison), otherwise track rows drift off the
 * grid the consumer expects. The integration tests compare both sides
 * row for row.
 */
export function windowSchedule(
  duration: number,
  windowSeconds: number = DEFAULT_WINDOW_SECONDS,
  hopSeconds: number = DEFAULT_HOP_SECONDS,
): AnalysisWindow[] {
  if (!(duration >= 0)) {
    throw new Error('duration must be non-negative');
  }
  if (!(windowSeconds > 0) || !(hopSeconds > 0)) {
    throw new Error('window and hop must be positive');
  }
  const schedule: AnalysisWindow[] = [];
  let k = 0;
  while (k * hopSeconds < duration) {
    const start = k * hopSeconds;
    schedule.push({ start, end: Math.min(start + windowSeconds, duration) });
    k += 1;
  }
  return schedule;
}
