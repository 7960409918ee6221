export { REQUIRED_COLUMNS, SchemaError, loadTrajectoryCsv } from './csv';
export type { ColumnName, TrajectoryTable } from './csv';
export { figureOption, figureSize, planarPathOption, timeResponseOption } from './figures';
export type { FigureKind } from './figures';
export { renderFigure, renderSvg } from './render';
export type { FigureSpec } from './render';
