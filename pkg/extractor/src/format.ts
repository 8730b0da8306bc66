/**
 * Embedding interchange format: writing, parsing, and verification.
 *
 * The format is line-oriented UTF-8 text:
 *
 *     #model=<name> level=<sentence|token> dim=<d>
 *     id<TAB>token_index<TAB>f1 f2 ... fd
 *
 * Lines after the header starting with `#` are comments. Sentence-level
 * files carry exactly one row per id with token_index 0; token-level files
 * carry consecutive token_index values starting at 0 per id. Floats are
 * written with JavaScript's shortest round-trip decimal representation, so
 * a consumer parsing them back recovers bit-identical IEEE-754 doubles.
 */

import * as fs from 'node:fs';

export type Level = 'sentence' | 'token';

export interface InterchangeHeader {
  model: string;
  level: Level;
  dim: number;
}

export interface VectorRow {
  id: string;
  tokenIndex: number;
  values: number[];
}

export interface ParseIssue {
  line: number;
  message: string;
}

export interface ParseResult {
  header: InterchangeHeader | null;
  rows: VectorRow[];
  issues: ParseIssue[];
}

const HEADER_RE = /^#model=(\S+) level=(sentence|token) dim=([0-9]+)\s*$/;
const FLOAT_RE = /^[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?$/;

export function formatHeader(header: InterchangeHeader): string {
  return `#model=${header.model} level=${header.level} dim=${header.dim}`;
}

/** Shortest round-trip decimal; negative zero keeps its sign bit. */
export function formatFloat(value: number): string {
  return Object.is(value, -0) ? '-0' : value.toString();
}

export function formatRow(row: VectorRow): string {
  const floats = row.values.map(formatFloat).join(' ');
  return `${row.id}\t${row.tokenIndex}\t${floats}`;
}

export function writeInterchange(
  path: string,
  header: InterchangeHeader,
  rows: VectorRow[],
  comments: string[] = [],
): void {
  const lines = [formatHeader(header)];
  for (const comment of comments) {
    lines.push(`# ${comment}`);
  }
  for (const row of rows) {
    if (row.values.length !== header.dim) {
      throw new Error(
        `row for id ${row.id} has ${row.values.length} floats, header declares dim=${header.dim}`,
      );
    }
    lines.push(formatRow(row));
  }
  fs.writeFileSync(path, lines.join('\n') + '\n', 'utf-8');
}

function parseFloatStrict(text: string): number | null {
  if (!FLOAT_RE.test(text)) {
    return null;
  }
  const value = Number(text);
  return Number.isFinite(value) ? value : null;
}

/**
 * Parse interchange text with the same rules as the downstream loader,
 * collecting every violation instead of stopping at the first.
 */
export function parseInterchange(text: string): ParseResult {
  const issues: ParseIssue[] = [];
  const rows: VectorRow[] = [];
  const lines = text.split('\n');
  if (lines.length > 0 && lines[lines.length - 1] === '') {
    lines.pop(); // trailing newline
  }

  const headerMatch = lines.length > 0 ? HEADER_RE.exec(lines[0]) : null;
  if (!headerMatch) {
    issues.push({
      line: 1,
      message: 'missing or malformed header `#model=<name> level=<level> dim=<d>`',
    });
    return { header: null, rows, issues };
  }
  const header: InterchangeHeader = {
    model: headerMatch[1],
    level: headerMatch[2] as Level,
    dim: Number(headerMatch[3]),
  };
  if (header.dim <= 0) {
    issues.push({ line: 1, message: 'dim must be positive' });
    return { header, rows, issues };
  }

  const tokenCounts = new Map<string, number>();
  for (let i = 1; i < lines.length; i++) {
    const lineNumber = i + 1;
    const line = lines[i];
    if (line.startsWith('#')) {
      continue;
    }
    const fields = line.split('\t');
    if (fields.length !== 3) {
      issues.push({
        line: lineNumber,
        message: `expected \`id<TAB>token_index<TAB>floats\`, found ${fields.length} fields`,
      });
      continue;
    }
    const [id, indexText, floatText] = fields;
    if (!id) {
      issues.push({ line: lineNumber, message: 'empty id' });
      continue;
    }
    if (!/^-?\d+$/.test(indexText)) {
      issues.push({ line: lineNumber, message: `bad token_index ${indexText}` });
      continue;
    }
    const tokenIndex = Number(indexText);
    const pieces = floatText.split(/\s+/).filter((p) => p.length > 0);
    const values: number[] = [];
    let badFloat = false;
    for (const piece of pieces) {
      const value = parseFloatStrict(piece);
      if (value === null) {
        issues.push({ line: lineNumber, message: `non-numeric vector component ${piece}` });
        badFloat = true;
        break;
      }
      values.push(value);
    }
    if (badFloat) {
      continue;
    }
    if (values.length !== header.dim) {
      issues.push({
        line: lineNumber,
        message: `row has ${values.length} floats, header declares dim=${header.dim}`,
      });
      continue;
    }
    const seen = tokenCounts.get(id) ?? 0;
    if (header.level === 'sentence') {
      if (seen > 0) {
        issues.push({ line: lineNumber, message: `duplicate id ${id}` });
        continue;
      }
      if (tokenIndex !== 0) {
        issues.push({
          line: lineNumber,
          message: 'sentence-level rows must carry token_index 0',
        });
        continue;
      }
    } else if (tokenIndex !== seen) {
      issues.push({
        line: lineNumber,
        message: `id ${id}: token_index ${tokenIndex}, expected ${seen} (consecutive from 0)`,
      });
      continue;
    }
    tokenCounts.set(id, seen + 1);
    rows.push({ id, tokenIndex, values });
  }
  return { header, rows, issues };
}

/** Re-parse and report violations; an empty array means the file is valid. */
export function verifyFile(path: string): ParseIssue[] {
  const text = fs.readFileSync(path, 'utf-8');
  return parseInterchange(text).issues;
}
