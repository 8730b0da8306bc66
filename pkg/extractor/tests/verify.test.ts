/** Verification must accept extractor output and reject corrupted files. */

import * as fs from 'node:fs';
import * as path from 'node:path';

import { describe, expect, it } from 'vitest';

import { extract } from '../src/extractors.js';
import { parseInterchange, verifyFile } from '../src/format.js';
import { tempDir, writeDataset, writeIdentitySource } from './fixtures.js';

function makeValidFile(dir: string): string {
  const ids = ['a', 'b', 'c'];
  const dataset = writeDataset(dir, ids);
  const source = writeIdentitySource(
    dir,
    ids.map((id, i) => [id, 0, [i, i + 0.5, -i]]),
  );
  const out = path.join(dir, 'valid.emb');
  extract({ model: `identity:${source}`, level: 'sentence', clean: 'raw' }, dataset, out);
  return out;
}

describe('verify', () => {
  it('passes a well-formed extractor output', () => {
    const out = makeValidFile(tempDir());
    expect(verifyFile(out)).toHaveLength(0);
  });

  it('rejects a wrong-dim row at its line', () => {
    const out = makeValidFile(tempDir());
    const lines = fs.readFileSync(out, 'utf-8').split('\n');
    // row for id b: drop its last float
    const target = lines.findIndex((l) => l.startsWith('b\t'));
    const fields = lines[target].split('\t');
    fields[2] = fields[2].split(' ').slice(0, 2).join(' ');
    lines[target] = fields.join('\t');
    fs.writeFileSync(out, lines.join('\n'));
    const issues = verifyFile(out);
    expect(issues).toHaveLength(1);
    expect(issues[0].line).toBe(target + 1);
    expect(issues[0].message).toContain('dim=3');
  });

  it('rejects a duplicate id and names it', () => {
    const out = makeValidFile(tempDir());
    const lines = fs.readFileSync(out, 'utf-8').split('\n').filter((l) => l !== '');
    const dup = lines.find((l) => l.startsWith('a\t'))!;
    lines.push(dup);
    fs.writeFileSync(out, lines.join('\n') + '\n');
    const issues = verifyFile(out);
    expect(issues).toHaveLength(1);
    expect(issues[0].message).toContain('duplicate id a');
  });

  it('rejects a truncated row at its line', () => {
    const out = makeValidFile(tempDir());
    const lines = fs.readFileSync(out, 'utf-8').split('\n');
    const target = lines.findIndex((l) => l.startsWith('c\t'));
    lines[target] = lines[target].split('\t').slice(0, 2).join('\t');
    fs.writeFileSync(out, lines.join('\n'));
    const issues = verifyFile(out);
    expect(issues).toHaveLength(1);
    expect(issues[0].line).toBe(target + 1);
    expect(issues[0].message).toContain('2 fields');
  });

  it('rejects a missing header', () => {
    const dir = tempDir();
    const file = path.join(dir, 'nohdr.emb');
    fs.writeFileSync(file, 'a\t0\t1 2 3\n');
    const issues = verifyFile(file);
    expect(issues[0].message).toContain('header');
  });

  it('rejects out-of-order token indices', () => {
    const dir = tempDir();
    const file = path.join(dir, 'gap.emb');
    fs.writeFileSync(file, '#model=m level=token dim=1\na\t0\t1\na\t2\t2\n');
    const issues = verifyFile(file);
    expect(issues).toHaveLength(1);
    expect(issues[0].message).toContain('token_index 2, expected 1');
  });

  it('collects multiple issues with line numbers', () => {
    const dir = tempDir();
    const file = path.join(dir, 'multi.emb');
    fs.writeFileSync(
      file,
      '#model=m level=sentence dim=2\na\t0\t1 2\nb\t0\tx y\nc\t0\t1\n',
    );
    const issues = verifyFile(file);
    expect(issues.map((i) => i.line)).toEqual([3, 4]);
  });

  it('ignores comment lines after the header', () => {
    const dir = tempDir();
    const file = path.join(dir, 'comments.emb');
    fs.writeFileSync(file, '#model=m level=sentence dim=1\n# source-sha256=abc\na\t0\t1\n');
    expect(verifyFile(file)).toHaveLength(0);
    expect(parseInterchange(fs.readFileSync(file, 'utf-8')).rows).toHaveLength(1);
  });
});
