import { execFileSync } from 'child_process';
import { existsSync, mkdtempSync, readFileSync, statSync } from 'fs';
import { tmpdir } from 'os';
import { join } from 'path';
import { beforeAll, describe, expect, it } from 'vitest';
import { main } from '../src/cli';
import { renderFigure, renderSvg } from '../src/render';
import { HEADER, sampleRow, writeCsv } from './csv.test';

const PNG_MAGIC = Buffer.from([0x89, 0x50, 0x4e, 0x47]);

let outDir: string;

/** Produce the two preset trajectory CSVs through the simulator CLI. */
beforeAll(() => {
  outDir = mkdtempSync(join(tmpdir(), 'plots-e2e-'));
  for (const preset of ['fig2', 'fig3']) {
    execFileSync('python3', ['-m', 'spherebot.cli', 'run', '--preset', preset, '--out', outDir], {
      stdio: 'pipe',
    });
  }
}, 120_000);

describe('figure analogues from the preset runs', () => {
  it('renders all four figures without error', () => {
    for (const preset of ['fig2', 'fig3']) {
      const input = join(outDir, `${preset}_trajectory.csv`);
      for (const kind of ['time-response', 'planar-path'] as const) {
        const output = join(outDir, `${preset}_${kind}.png`);
        renderFigure({ kind, input, output });
        const bytes = readFileSync(output);
        expect(bytes.subarray(0, 4).equals(PNG_MAGIC)).toBe(true);
        expect(bytes.length).toBeGreaterThan(1000);
      }
    }
  }, 120_000);

  it('puts the start marker at (4, 3) on the planar paths', () => {
    for (const preset of ['fig2', 'fig3']) {
      const svg = renderSvg({ kind: 'planar-path', input: join(outDir, `${preset}_trajectory.csv`) });
      expect(svg).toContain('start (4, 3)');
    }
  });

  it('renders deterministically and never touches the input', () => {
    const input = join(outDir, 'fig2_trajectory.csv');
    const before = statSync(input).mtimeMs;
    const a = renderSvg({ kind: 'time-response', input });
    const b = renderSvg({ kind: 'time-response', input });
    expect(a).toBe(b);
    expect(statSync(input).mtimeMs).toBe(before);
  });
});

describe('edge cases', () => {
  it('refuses an empty-but-valid-header CSV and writes nothing', () => {
    const input = writeCsv([HEADER]);
    const output = join(mkdtempSync(join(tmpdir(), 'plots-out-')), 'fig.png');
    expect(() => renderFigure({ kind: 'time-response', input, output })).toThrowError(/no data rows/);
    expect(existsSync(output)).toBe(false);
  });

  it('plots a single-row CSV as a single point', () => {
    const input = writeCsv([HEADER, sampleRow(0)]);
    const output = join(mkdtempSync(join(tmpdir(), 'plots-out-')), 'point.svg');
    renderFigure({ kind: 'planar-path', input, output });
    expect(readFileSync(output, 'utf8')).toContain('start (4, 3)');
  });

  it('writes SVG directly when the extension asks for it', () => {
    const input = writeCsv([HEADER, sampleRow(0), sampleRow(0.01)]);
    const output = join(mkdtempSync(join(tmpdir(), 'plots-out-')), 'fig.svg');
    renderFigure({ kind: 'time-response', input, output });
    expect(readFileSync(output, 'utf8')).toContain('<svg');
  });
});

describe('cli', () => {
  it('runs end to end', () => {
    const input = writeCsv([HEADER, sampleRow(0), sampleRow(0.01, 3.9, 2.9)]);
    const output = join(mkdtempSync(join(tmpdir(), 'plots-out-')), 'cli.png');
    expect(main(['planar-path', '--in', input, '--out', output])).toBe(0);
    expect(readFileSync(output).subarray(0, 4).equals(PNG_MAGIC)).toBe(true);
  });

  it('reports usage errors with exit code 2', () => {
    expect(main(['sideways-view', '--in', 'x.csv', '--out', 'y.png'])).toBe(2);
    expect(main(['planar-path', '--in', 'only-in.csv'])).toBe(2);
    expect(main(['planar-path', '--in', 'missing.csv', '--out', 'y.png'])).toBe(2);
    expect(main(['planar-path', '--what', 'x', '--out', 'y.png'])).toBe(2);
  });
});
