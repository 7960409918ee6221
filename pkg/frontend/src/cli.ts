#!/usr/bin/env node
/**
 * plots <kind> --in <csv> --out <png|svg>
 *
 * kind: time-response | planar-path
 * Reads a simulator trajectory CSV and writes one figure. Exit status 0 on
 * success, 2 on usage or input errors.
 */
import { SchemaError } from './csv';
import { FigureKind } from './figures';
import { renderFigure } from './render';

const USAGE = 'usage: plots <time-response|planar-path> --in <trajectory.csv> --out <figure.png|.svg>';

export function parseArgs(argv: string[]): { kind: FigureKind; input: string; output: string } {
  const [kind, ...rest] = argv;
  if (kind !== 'time-response' && kind !== 'planar-path') {
    throw new Error(`unknown figure kind ${JSON.stringify(kind ?? null)}\n${USAGE}`);
  }
  let input: string | undefined;
  let output: string | undefined;
  for (let i = 0; i < rest.length; i += 2) {
    const flag = rest[i];
    const value = rest[i + 1];
    if (value === undefined) throw new Error(`missing value for ${flag}\n${USAGE}`);
    if (flag === '--in') input = value;
    else if (flag === '--out') output = value;
    else throw new Error(`unknown flag ${flag}\n${USAGE}`);
  }
  if (!input || !output) throw new Error(`both --in and --out are required\n${USAGE}`);
  return { kind, input, output };
}

export function main(argv: string[]): number {
  try {
    const spec = parseArgs(argv);
    renderFigure(spec);
    console.log(`wrote ${spec.output}`);
    return 0;
  } catch (err) {
    if (err instanceof SchemaError || err instanceof Error) {
      console.error(`error: ${err.message}`);
      return 2;
    }
    throw err;
  }
}

if (require.main === module) {
  process.exit(main(process.argv.slice(2)));
}
