#!/usr/bin/env node
/**
 * embed-extract CLI.
 *
 *   embed-extract extract --model <id> --level <sentence|token> \
 *       --in <dataset.tsv> --out <file> [--clean <variant>]
 *   embed-extract verify --in <file>
 */

import { pathToFileURL } from 'node:url';

import { extract } from './extractors.js';
import { Level, verifyFile } from './format.js';

function parseFlags(argv: string[]): Map<string, string> {
  const flags = new Map<string, string>();
  for (let i = 0; i < argv.length; i += 2) {
    const key = argv[i];
    const value = argv[i + 1];
    if (!key.startsWith('--') || value === undefined) {
      throw new Error(`malformed arguments near ${key}`);
    }
    flags.set(key.slice(2), value);
  }
  return flags;
}

function required(flags: Map<string, string>, name: string): string {
  const value = flags.get(name);
  if (value === undefined) {
    throw new Error(`missing required flag --${name}`);
  }
  return value;
}

export function main(argv: string[]): number {
  const [command, ...rest] = argv;
  try {
    if (command === 'extract') {
      const flags = parseFlags(rest);
      const result = extract(
        {
          model: required(flags, 'model'),
          level: required(flags, 'level') as Level,
          clean: flags.get('clean') ?? 'raw',
        },
        required(flags, 'in'),
        required(flags, 'out'),
      );
      console.log(`wrote ${result.rows} rows to ${result.outPath}`);
      for (const warning of result.warnings) {
        console.error(`warning: ${warning}`);
      }
      if (result.logPath) {
        console.error(`warnings logged to ${result.logPath}`);
      }
      return 0;
    }
    if (command === 'verify') {
      const flags = parseFlags(rest);
      const issues = verifyFile(required(flags, 'in'));
      if (issues.length === 0) {
        console.log('ok');
        return 0;
      }
      for (const issue of issues) {
        console.error(`line ${issue.line}: ${issue.message}`);
      }
      return 1;
    }
    console.error('usage: embed-extract <extract|verify> [flags]');
    return 2;
  } catch (error) {
    console.error(`error: ${error instanceof Error ? error.message : error}`);
    return 2;
  }
}

const invokedDirectly =
  process.argv[1] !== undefined && import.meta.url === pathToFileURL(process.argv[1]).href;
if (invokedDirectly) {
  process.exit(main(process.argv.slice(2)));
}
