import { pathToFileURL } from 'node:url';

export function invokedAsScript(metaUrl: string): boolean {
  return Boolean(process.argv[1]) && metaUrl === pathToFileURL(process.argv[1]).href;
}

/** Run a CLI body; any thrown error becomes a message on stderr and exit 1. */
export function runCli(body: () => void): void {
  try {
    body();
  } catch (err) {
    console.error(`Error: ${err instanceof Error ? err.message : String(err)}`);
    process.exit(1);
  }
}
