/**
 * Extractors turning a task dataset into an interchange file.
 *
 * Two offline-friendly vector sources are built in:
 *
 * - `identity:<vectors.tsv>` replays precomputed vectors keyed by instance
 *   id (rows shaped `id<TAB>token_index<TAB>floats`), at either level. This
 *   is the fixture path; it lets the downstream test suite run without any
 *   neural framework.
 * - `wordvec:<vectors.txt>` looks tweet tokens up in a static word-vector
 *   file (word2vec text format, optional `count dim` first line) and emits
 *   token-level rows; out-of-vocabulary tokens are skipped, and a tweet
 *   with no known token gets one zero vector plus a sidecar-log warning.
 *
 * Neural encoder families are deliberately not bundled: export their
 * vectors with native tooling and replay them through `identity:`.
 */

import * as crypto from 'node:crypto';
import * as fs from 'node:fs';

import { InterchangeHeader, Level, VectorRow, writeInterchange } from './format.js';

export const NEURAL_FAMILIES = ['word2vec', 'deepmoji', 'use', 'bert', 'sbert', 'roberta'];

export const CLEANING_VARIANTS = ['raw', 'general', 'general+stopwords'];

export interface ExtractorSpec {
  /** `identity:<path>` or `wordvec:<path>`. */
  model: string;
  level: Level;
  /** Recorded in the header comment; the input text is used as given. */
  clean: string;
}

export interface DatasetRow {
  id: string;
  text: string;
}

export interface ExtractResult {
  outPath: string;
  rows: number;
  warnings: string[];
  logPath: string | null;
}

/** Parse the 4-column task TSV (header line skipped); labels are ignored. */
export function readDataset(path: string): DatasetRow[] {
  const text = fs.readFileSync(path, 'utf-8');
  const lines = text.split('\n');
  const rows: DatasetRow[] = [];
  const seen = new Set<string>();
  for (let i = 1; i < lines.length; i++) {
    const line = lines[i].replace(/\r$/, '');
    if (line === '' && i === lines.length - 1) {
      continue;
    }
    const fields = line.split('\t');
    if (fields.length !== 4) {
      throw new Error(`${path}:${i + 1}: expected 4 tab-separated columns, found ${fields.length}`);
    }
    const [id, tweet] = fields;
    if (!id || !tweet) {
      throw new Error(`${path}:${i + 1}: empty id or text`);
    }
    if (seen.has(id)) {
      throw new Error(`${path}:${i + 1}: duplicate instance id ${id}`);
    }
    seen.add(id);
    rows.push({ id, text: tweet });
  }
  return rows;
}

interface IdentitySource {
  dim: number;
  vectors: Map<string, number[][]>;
}

function parseIdentitySource(path: string): IdentitySource {
  const text = fs.readFileSync(path, 'utf-8');
  const lines = text.split('\n');
  const vectors = new Map<string, number[][]>();
  let dim = -1;
  for (let i = 0; i < lines.length; i++) {
    const line = lines[i];
    if (line === '' || line.startsWith('#')) {
      continue;
    }
    const fields = line.split('\t');
    if (fields.length !== 3) {
      throw new Error(`${path}:${i + 1}: identity source rows are \`id<TAB>token_index<TAB>floats\``);
    }
    const values = fields[2]
      .split(/\s+/)
      .filter((p) => p.length > 0)
      .map((p) => {
        const v = Number(p);
        if (!Number.isFinite(v)) {
          throw new Error(`${path}:${i + 1}: non-numeric vector component ${p}`);
        }
        return v;
      });
    if (dim === -1) {
      dim = values.length;
    } else if (values.length !== dim) {
      throw new Error(`${path}:${i + 1}: inconsistent dim ${values.length}, expected ${dim}`);
    }
    const list = vectors.get(fields[0]) ?? [];
    list.push(values);
    vectors.set(fields[0], list);
  }
  if (dim <= 0) {
    throw new Error(`${path}: identity source contains no vectors`);
  }
  return { dim, vectors };
}

interface WordVectors {
  dim: number;
  vectors: Map<string, number[]>;
}

function parseWordVectors(path: string): WordVectors {
  const text = fs.readFileSync(path, 'utf-8');
  const lines = text.split('\n');
  const vectors = new Map<string, number[]>();
  let dim = -1;
  let start = 0;
  const first = (lines[0] ?? '').trim().split(/\s+/);
  if (first.length === 2 && /^\d+$/.test(first[0]) && /^\d+$/.test(first[1])) {
    dim = Number(first[1]); // word2vec text header: `count dim`
    start = 1;
  }
  for (let i = start; i < lines.length; i++) {
    const line = lines[i].trim();
    if (line === '') {
      continue;
    }
    const parts = line.split(/\s+/);
    const word = parts[0].toLowerCase();
    const values = parts.slice(1).map((p) => {
      const v = Number(p);
      if (!Number.isFinite(v)) {
        throw new Error(`${path}:${i + 1}: non-numeric vector component ${p}`);
      }
      return v;
    });
    if (dim === -1) {
      dim = values.length;
    } else if (values.length !== dim) {
      throw new Error(`${path}:${i + 1}: inconsistent dim ${values.length}, expected ${dim}`);
    }
    if (!vectors.has(word)) {
      vectors.set(word, values);
    }
  }
  if (dim <= 0 || vectors.size === 0) {
    throw new Error(`${path}: word-vector file contains no vectors`);
  }
  return { dim, vectors };
}

function sha256(path: string): string {
  return crypto.createHash('sha256').update(fs.readFileSync(path)).digest('hex');
}

function splitModel(model: string): { kind: string; source: string } {
  const colon = model.indexOf(':');
  if (colon === -1) {
    return { kind: model, source: '' };
  }
  return { kind: model.slice(0, colon), source: model.slice(colon + 1) };
}

/** Build the interchange file for a dataset; one entry per dataset id, in order. */
export function extract(spec: ExtractorSpec, datasetPath: string, outPath: string): ExtractResult {
  if (spec.level !== 'sentence' && spec.level !== 'token') {
    throw new Error(`level must be sentence or token, got ${spec.level}`);
  }
  if (!CLEANING_VARIANTS.includes(spec.clean)) {
    throw new Error(`unknown cleaning variant ${spec.clean}; expected one of ${CLEANING_VARIANTS.join(', ')}`);
  }
  const { kind, source } = splitModel(spec.model);
  if (NEURAL_FAMILIES.includes(kind) && source === '') {
    throw new Error(
      `model weights for '${kind}' are not bundled; export its vectors with native ` +
        `tooling and replay them via identity:<file>`,
    );
  }
  if (kind !== 'identity' && kind !== 'wordvec') {
    throw new Error(`unknown extractor model ${spec.model}; use identity:<file> or wordvec:<file>`);
  }
  if (source === '' || !fs.existsSync(source)) {
    throw new Error(`model source file not found: ${source || '<missing>'}`);
  }

  const dataset = readDataset(datasetPath);
  const warnings: string[] = [];
  const rows: VectorRow[] = [];
  let dim: number;

  if (kind === 'identity') {
    const identity = parseIdentitySource(source);
    dim = identity.dim;
    for (const instance of dataset) {
      const vecs = identity.vectors.get(instance.id);
      if (vecs === undefined) {
        warnings.push(`id ${instance.id}: no vector in source; emitted zero vector`);
        rows.push({ id: instance.id, tokenIndex: 0, values: new Array(dim).fill(0) });
        continue;
      }
      const take = spec.level === 'sentence' ? vecs.slice(0, 1) : vecs;
      if (spec.level === 'sentence' && vecs.length > 1) {
        warnings.push(`id ${instance.id}: ${vecs.length} source rows at sentence level; kept the first`);
      }
      take.forEach((values, index) => {
        rows.push({ id: instance.id, tokenIndex: index, values });
      });
    }
  } else {
    if (spec.level !== 'token') {
      throw new Error('wordvec extraction is token-level; pass --level token');
    }
    const words = parseWordVectors(source);
    dim = words.dim;
    for (const instance of dataset) {
      const tokens = instance.text.split(/\s+/).filter((t) => t.length > 0);
      const hits = tokens
        .map((t) => words.vectors.get(t.toLowerCase()))
        .filter((v): v is number[] => v !== undefined);
      if (hits.length === 0) {
        warnings.push(`id ${instance.id}: no token in vocabulary; emitted zero vector`);
        rows.push({ id: instance.id, tokenIndex: 0, values: new Array(dim).fill(0) });
        continue;
      }
      hits.forEach((values, index) => {
        rows.push({ id: instance.id, tokenIndex: index, values });
      });
    }
  }

  const header: InterchangeHeader = { model: spec.model, level: spec.level, dim };
  const comments = [
    `clean=${spec.clean} (input text used as given; cleaning happens upstream)`,
    `source-sha256=${sha256(source)}`,
  ];
  writeInterchange(outPath, header, rows, comments);

  let logPath: string | null = null;
  if (warnings.length > 0) {
    logPath = `${outPath}.log`;
    fs.writeFileSync(logPath, warnings.join('\n') + '\n', 'utf-8');
  }
  return { outPath, rows: rows.length, warnings, logPath };
}
