import type { EChartsOption, SeriesOption } from 'echarts';
import { TrajectoryTable, zip } from './csv';

export type FigureKind = 'time-response' | 'planar-path';

export const TIME_RESPONSE_SIZE = { width: 900, height: 1000 };
export const PLANAR_PATH_SIZE = { width: 640, height: 640 };

const LINE_DEFAULTS = { type: 'line' as const, showSymbol: false, smooth: false };

function panel(
  index: number,
  top: number,
  height: number,
  yLabel: string,
  series: { name: string; data: [number, number][] }[],
): { grid: object; xAxis: object; yAxis: object; series: SeriesOption[] } {
  return {
    grid: { left: 70, right: 30, top: `${top}%`, height: `${height}%` },
    xAxis: {
      gridIndex: index,
      type: 'value',
      name: index === 3 ? 'time (s)' : '',
      nameLocation: 'middle',
      nameGap: 28,
      min: 'dataMin',
      max: 'dataMax',
    },
    yAxis: { gridIndex: index, type: 'value', name: yLabel },
    series: series.map((s) => ({
      ...LINE_DEFAULTS,
      name: s.name,
      data: s.data,
      xAxisIndex: index,
      yAxisIndex: index,
    })),
  };
}

/**
 * Four stacked panels against time: body angular velocity, the transported
 * vertical r3 (third row of R, rebuilt from the stored matrix entries),
 * planar position, and the Lyapunov value.
 */
export function timeResponseOption(tab: TrajectoryTable): EChartsOption {
  const t = tab.t;
  const panels = [
    panel(0, 4, 17, 'omega (rad/s)', [
      { name: 'wx', data: zip(t, tab.wx) },
      { name: 'wy', data: zip(t, tab.wy) },
      { name: 'wz', data: zip(t, tab.wz) },
    ]),
    panel(1, 28, 17, 'r3', [
      { name: 'r3x', data: zip(t, tab.r31) },
      { name: 'r3y', data: zip(t, tab.r32) },
      { name: 'r3z', data: zip(t, tab.r33) },
    ]),
    panel(2, 52, 17, 'position (m)', [
      { name: 'x', data: zip(t, tab.x) },
      { name: 'y', data: zip(t, tab.y) },
    ]),
    panel(3, 76, 17, 'V', [{ name: 'V', data: zip(t, tab.V) }]),
  ];
  return {
    animation: false,
    backgroundColor: '#ffffff',
    title: { text: 'Closed-loop time response', left: 'center' },
    legend: { top: 24, data: panels.flatMap((p) => p.series.map((s) => s.name as string)) },
    grid: panels.map((p) => p.grid),
    xAxis: panels.map((p) => p.xAxis),
    yAxis: panels.map((p) => p.yAxis),
    series: panels.flatMap((p) => p.series),
  } as EChartsOption;
}

/**
 * The (x, y) path in the plane, with a square marker on the first sample
 * (the start point) and a diamond on the origin (the regulation target).
 */
export function planarPathOption(tab: TrajectoryTable): EChartsOption {
  const start: [number, number] = [tab.x[0], tab.y[0]];
  return {
    animation: false,
    backgroundColor: '#ffffff',
    title: { text: 'Planar trajectory', left: 'center' },
    legend: { top: 24 },
    grid: { left: 70, right: 30, top: 60, bottom: 60 },
    xAxis: { type: 'value', name: 'x (m)', nameLocation: 'middle', nameGap: 28, scale: true },
    yAxis: { type: 'value', name: 'y (m)', nameLocation: 'middle', nameGap: 40, scale: true },
    series: [
      { ...LINE_DEFAULTS, name: 'path', data: zip(tab.x, tab.y) },
      {
        type: 'scatter',
        name: `start (${start[0]}, ${start[1]})`,
        data: [start],
        symbol: 'rect',
        symbolSize: 12,
      },
      { type: 'scatter', name: 'origin', data: [[0, 0]], symbol: 'diamond', symbolSize: 12 },
    ],
  } as EChartsOption;
}

export function figureOption(kind: FigureKind, tab: TrajectoryTable): EChartsOption {
  return kind === 'time-response' ? timeResponseOption(tab) : planarPathOption(tab);
}

export function figureSize(kind: FigureKind): { width: number; height: number } {
  return kind === 'time-response' ? TIME_RESPONSE_SIZE : PLANAR_PATH_SIZE;
}
