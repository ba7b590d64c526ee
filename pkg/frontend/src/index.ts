export {
  ResultTable,
  SchemaError,
  cleanSeries,
  numericColumn,
  parseResultCsv,
  requireColumns,
  toNumber,
} from "./csv.js";
export {
  CONTOUR_SPLITTING,
  FIGURE_KINDS,
  FigureKind,
  FigureSpec,
  renderFile,
  renderTable,
} from "./figures.js";
export { main } from "./cli.js";
