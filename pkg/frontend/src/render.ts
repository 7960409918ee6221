import { writeFileSync } from 'fs';
import { extname } from 'path';
import * as echarts from 'echarts';
import { Resvg } from '@resvg/resvg-js';
import { loadTrajectoryCsv } from './csv';
import { FigureKind, figureOption, figureSize } from './figures';

export interface FigureSpec {
  kind: FigureKind;
  input: string;
  output: string;
}

/** Server-side render of a figure to an SVG string. */
export function renderSvg(spec: Pick<FigureSpec, 'kind' | 'input'>): string {
  const table = loadTrajectoryCsv(spec.input);
  const { width, height } = figureSize(spec.kind);
  const chart = echarts.init(null, null, { renderer: 'svg', ssr: true, width, height });
  try {
    chart.setOption(figureOption(spec.kind, table));
    return stabilizeClassNames(chart.renderToSVGString());
  } finally {
    chart.dispose();
  }
}

/**
 * echarts stamps SVG ids and class names from process-global instance
 * counters, so repeated renders of the same input differ byte-wise. Strip
 * the instance prefix and renumber the style classes by first appearance
 * to make identical inputs give byte-identical files.
 */
function stabilizeClassNames(svg: string): string {
  const seen = new Map<string, string>();
  return svg.replace(/\bzr\d+-/g, 'zr-').replace(/zr-cls-\d+/g, (token) => {
    let stable = seen.get(token);
    if (stable === undefined) {
      stable = `zr-cls-${seen.size}`;
      seen.set(token, stable);
    }
    return stable;
  });
}

/**
 * Render a figure to the output path. The format follows the file
 * extension: .svg is written directly, anything else is rasterized to PNG.
 * The input CSV is only ever read; rendering twice produces identical bytes.
 */
export function renderFigure(spec: FigureSpec): void {
  const svg = renderSvg(spec);
  if (extname(spec.output).toLowerCase() === '.svg') {
    writeFileSync(spec.output, svg);
    return;
  }
  const png = new Resvg(svg, { fitTo: { mode: 'original' } }).render().asPng();
  writeFileSync(spec.output, png);
}
