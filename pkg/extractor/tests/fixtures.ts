/** Shared fixture helpers for the extractor tests. */

import * as fs from 'node:fs';
import * as os from 'node:os';
import * as path from 'node:path';

import { formatFloat } from '../src/format.js';

export function tempDir(): string {
  return fs.mkdtempSync(path.join(os.tmpdir(), 'embed-extract-'));
}

export function writeDataset(dir: string, ids: string[], texts?: string[]): string {
  const lines = ['ID\tTweet\tAffect Dimension\tIntensity Class'];
  ids.forEach((id, i) => {
    const text = texts ? texts[i] : `tweet number ${i}`;
    lines.push(`${id}\t${text}\tanger\t1: low amount of anger can be inferred`);
  });
  const file = path.join(dir, 'dataset.tsv');
  fs.writeFileSync(file, lines.join('\n') + '\n', 'utf-8');
  return file;
}

/** Awkward doubles that stress shortest-round-trip formatting. */
export const AWKWARD = [
  Math.PI,
  1 / 3,
  0.1 + 0.2,
  -2.5e300,
  5e-324,
  1e-17,
  -0.0,
  123456789.123456789,
  2 ** 53 - 1,
];

export function writeIdentitySource(
  dir: string,
  rows: Array<[string, number, number[]]>,
): string {
  const lines = rows.map(
    ([id, index, values]) => `${id}\t${index}\t${values.map(formatFloat).join(' ')}`,
  );
  const file = path.join(dir, 'vectors.tsv');
  fs.writeFileSync(file, lines.join('\n') + '\n', 'utf-8');
  return file;
}
