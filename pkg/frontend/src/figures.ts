import { readFileSync, writeFileSync } from "node:fs";

import {
  ResultTable,
  SchemaError,
  cleanSeries,
  numericColumn,
  parseResultCsv,
  requireColumns,
  toNumber,
} from "./csv.js";
import {
  PALETTE,
  Rect,
  axes,
  colorRamp,
  contourSegments,
  el,
  legend,
  linearScale,
  niceTicks,
  plotRect,
  polyline,
  svgDocument,
  text,
} from "./svg.js";

export type FigureKind = "levels" | "fidelity" | "evolution" | "d_curves" | "heatmap";

export const FIGURE_KINDS: FigureKind[] = [
  "levels",
  "fidelity",
  "evolution",
  "d_curves",
  "heatmap",
];

/** What to draw: one table in, one SVG out, optional axis-label overrides. */
export interface FigureSpec {
  kind: FigureKind;
  input: string;
  output: string;
  xLabel?: string;
  yLabel?: string;
}

/** Splitting level highlighted on the heatmap, in bare-qubit-frequency units. */
export const CONTOUR_SPLITTING = 5e-4;

interface Labels {
  xLabel?: string;
  yLabel?: string;
}

function padded(lo: number, hi: number, frac = 0.05): [number, number] {
  const span = hi - lo;
  const pad = span > 0 ? frac * span : Math.max(1e-12, Math.abs(hi)) * frac;
  return [lo - pad, hi + pad];
}

function domainOf(series: number[][]): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const values of series) {
    for (const v of values) {
      if (!Number.isFinite(v)) continue;
      if (v < lo) lo = v;
      if (v > hi) hi = v;
    }
  }
  if (!(lo <= hi)) throw new SchemaError("no finite values to plot");
  return [lo, hi];
}

function metaNumber(metadata: Record<string, unknown>, path: string[]): number | null {
  let node: unknown = metadata;
  for (const key of path) {
    if (typeof node !== "object" || node === null) return null;
    node = (node as Record<string, unknown>)[key];
  }
  return typeof node === "number" && Number.isFinite(node) ? node : null;
}

// ---------------------------------------------------------------------------
// line-plot kinds

function renderLevels(table: ResultTable, labels: Labels): string {
  requireColumns(table, ["omega_c", "energy_lower", "energy_upper"]);
  const omega = numericColumn(table, "omega_c");
  const lower = cleanSeries(omega, numericColumn(table, "energy_lower"));
  const upper = cleanSeries(omega, numericColumn(table, "energy_upper"));

  const rect = plotRect();
  const [x0, x1] = domainOf([lower.x, upper.x]);
  const [y0, y1] = padded(...domainOf([lower.y, upper.y]));
  const sx = linearScale(x0, x1, rect.left, rect.right);
  const sy = linearScale(y0, y1, rect.bottom, rect.top);

  const body = [
    axes({
      sx,
      sy,
      xTicks: niceTicks(x0, x1),
      yTicks: niceTicks(y0, y1),
      xLabel: labels.xLabel ?? "cavity frequency / qubit frequency",
      yLabel: labels.yLabel ?? "energy / qubit frequency",
    }),
  ];

  const star = metaNumber(table.metadata, ["crossing", "omega_c_star"]);
  if (star !== null && star >= x0 && star <= x1) {
    body.push(
      el("line", {
        x1: sx(star),
        y1: rect.top,
        x2: sx(star),
        y2: rect.bottom,
        stroke: PALETTE.grey,
        "stroke-width": "1.20",
        "stroke-dasharray": "4 4",
      })
    );
  }
  body.push(polyline(lower.x.map(sx), lower.y.map(sy), PALETTE.blue));
  body.push(polyline(upper.x.map(sx), upper.y.map(sy), PALETTE.orange));
  body.push(
    legend(rect.left + 12, rect.top + 10, [
      { label: "lower level", color: PALETTE.blue },
      { label: "upper level", color: PALETTE.orange },
    ])
  );
  return svgDocument(body, "Energy levels across the avoided crossing");
}

function renderFidelity(table: ResultTable, labels: Labels): string {
  const sweep = table.columns.includes("lambda") ? "lambda" : "delta";
  requireColumns(table, [sweep, "fidelity_plus", "fidelity_minus"]);
  const x = numericColumn(table, sweep);
  const plus = cleanSeries(x, numericColumn(table, "fidelity_plus"));
  const minus = cleanSeries(x, numericColumn(table, "fidelity_minus"));

  const rect = plotRect();
  const [x0, x1] = domainOf([plus.x, minus.x]);
  const [yLo, yHi] = domainOf([plus.y, minus.y]);
  const [y0, y1] = padded(Math.min(yLo, 0.95), Math.max(yHi, 1.0), 0.04);
  const sx = linearScale(x0, x1, rect.left, rect.right);
  const sy = linearScale(y0, y1, rect.bottom, rect.top);

  const body = [
    axes({
      sx,
      sy,
      xTicks: niceTicks(x0, x1),
      yTicks: niceTicks(y0, y1),
      xLabel: labels.xLabel ?? `${sweep} / qubit frequency`,
      yLabel: labels.yLabel ?? "fidelity",
    }),
    el("line", {
      x1: rect.left,
      y1: sy(0.95),
      x2: rect.right,
      y2: sy(0.95),
      stroke: PALETTE.grey,
      "stroke-width": "1.20",
      "stroke-dasharray": "6 4",
    }),
    text(rect.right - 6, sy(0.95) - 6, "0.95", {
      "text-anchor": "end",
      "font-size": "11",
      fill: PALETTE.grey,
    }),
    polyline(plus.x.map(sx), plus.y.map(sy), PALETTE.blue),
    polyline(minus.x.map(sx), minus.y.map(sy), PALETTE.orange),
    legend(rect.left + 12, rect.top + 10, [
      { label: "symmetric hybrid", color: PALETTE.blue },
      { label: "antisymmetric hybrid", color: PALETTE.orange },
    ]),
  ];
  return svgDocument(body, "Hybrid-state fidelities at the crossing");
}

function renderEvolution(table: ResultTable, labels: Labels): string {
  requireColumns(table, ["t", "photon_number", "p_qutrit_excited", "p_both_excited"]);
  const t = numericColumn(table, "t");
  const photon = cleanSeries(t, numericColumn(table, "photon_number"));
  const qutrit = cleanSeries(t, numericColumn(table, "p_qutrit_excited"));
  const both = cleanSeries(t, numericColumn(table, "p_both_excited"));

  const rect = plotRect();
  const [x0, x1] = domainOf([photon.x]);
  const [, yHi] = domainOf([photon.y, qutrit.y, both.y]);
  const y1 = Math.max(1.0, yHi) * 1.04;
  const sx = linearScale(x0, x1, rect.left, rect.right);
  const sy = linearScale(0, y1, rect.bottom, rect.top);

  const body = [
    axes({
      sx,
      sy,
      xTicks: niceTicks(x0, x1),
      yTicks: niceTicks(0, y1),
      xLabel: labels.xLabel ?? "time x qubit frequency",
      yLabel: labels.yLabel ?? "population",
    }),
    polyline(photon.x.map(sx), photon.y.map(sy), PALETTE.orange),
    polyline(qutrit.x.map(sx), qutrit.y.map(sy), PALETTE.green),
    polyline(both.x.map(sx), both.y.map(sy), PALETTE.blue),
    legend(rect.right - 162, rect.top + 10, [
      { label: "both excited", color: PALETTE.blue },
      { label: "qutrit excited", color: PALETTE.green },
      { label: "photon number", color: PALETTE.orange },
    ]),
  ];
  return svgDocument(body, "Excitation transfer dynamics");
}

function renderDCurves(table: ResultTable, labels: Labels): string {
  const [iDelta, iLambda, iD] = requireColumns(table, [
    "delta",
    "lambda",
    "max_difference",
  ]);
  const groups = new Map<string, { x: number[]; y: number[] }>();
  for (const row of table.rows) {
    const key = row[iDelta!]!;
    let group = groups.get(key);
    if (!group) {
      group = { x: [], y: [] };
      groups.set(key, group);
    }
    group.x.push(toNumber(row[iLambda!]!));
    group.y.push(toNumber(row[iD!]!));
  }

  const colors = [PALETTE.blue, PALETTE.orange, PALETTE.green, PALETTE.red, PALETTE.purple];
  const series = [...groups.entries()].map(([key, raw], i) => {
    const order = raw.x.map((_, k) => k).sort((a, b) => raw.x[a]! - raw.x[b]!);
    const sorted = cleanSeries(
      order.map((k) => raw.x[k]!),
      order.map((k) => raw.y[k]!)
    );
    return {
      label: `detuning = ${Number(key)}`,
      color: colors[i % colors.length]!,
      ...sorted,
    };
  });

  const rect = plotRect();
  const [x0, x1] = domainOf(series.map((s) => s.x));
  const [y0raw, yHi] = domainOf(series.map((s) => s.y));
  const y0 = Math.min(0, y0raw);
  const y1 = yHi * 1.08;
  const sx = linearScale(x0, x1, rect.left, rect.right);
  const sy = linearScale(y0, y1, rect.bottom, rect.top);

  const body = [
    axes({
      sx,
      sy,
      xTicks: niceTicks(x0, x1),
      yTicks: niceTicks(y0, y1),
      xLabel: labels.xLabel ?? "coupling / qubit frequency",
      yLabel: labels.yLabel ?? "peak population difference D",
    }),
  ];
  for (const s of series) {
    body.push(polyline(s.x.map(sx), s.y.map(sy), s.color));
  }
  body.push(
    legend(
      rect.left + 12,
      rect.top + 10,
      series.map((s) => ({ label: s.label, color: s.color }))
    )
  );
  return svgDocument(body, "Transfer visibility vs coupling strength");
}

// ---------------------------------------------------------------------------
// heatmap

function uniqueSorted(values: number[]): number[] {
  return [...new Set(values)].sort((a, b) => a - b);
}

function cellEdges(centres: number[]): number[] {
  if (centres.length === 1) {
    const c = centres[0]!;
    const half = Math.max(1e-12, Math.abs(c) * 0.05);
    return [c - half, c + half];
  }
  const edges: number[] = [];
  edges.push(centres[0]! - 0.5 * (centres[1]! - centres[0]!));
  for (let i = 0; i + 1 < centres.length; i++) {
    edges.push(0.5 * (centres[i]! + centres[i + 1]!));
  }
  const n = centres.length;
  edges.push(centres[n - 1]! + 0.5 * (centres[n - 1]! - centres[n - 2]!));
  return edges;
}

function renderHeatmap(table: ResultTable, labels: Labels): string {
  const [iLambda, iDelta, iValue] = requireColumns(table, [
    "lambda",
    "delta",
    "splitting_numeric",
  ]);
  const lambdas = uniqueSorted(table.rows.map((r) => toNumber(r[iLambda!]!)));
  const deltas = uniqueSorted(table.rows.map((r) => toNumber(r[iDelta!]!)));
  const grid: number[][] = deltas.map(() => lambdas.map(() => NaN));
  for (const row of table.rows) {
    const i = lambdas.indexOf(toNumber(row[iLambda!]!));
    const j = deltas.indexOf(toNumber(row[iDelta!]!));
    grid[j]![i] = toNumber(row[iValue!]!);
  }

  const positives = grid.flat().filter((v) => Number.isFinite(v) && v > 0);
  if (positives.length === 0) throw new SchemaError("no positive values to colour");
  const logLo = Math.log10(Math.min(...positives));
  const logHi = Math.log10(Math.max(...positives));
  const ramp = (v: number) => {
    if (!Number.isFinite(v) || v <= 0) return "#cccccc";
    const t = logHi > logLo ? (Math.log10(v) - logLo) / (logHi - logLo) : 0.5;
    return colorRamp(t);
  };

  const barWidth = 18;
  const rect: Rect = plotRect(barWidth + 58);
  const xEdges = cellEdges(lambdas);
  const yEdges = cellEdges(deltas);
  const sx = linearScale(xEdges[0]!, xEdges[xEdges.length - 1]!, rect.left, rect.right);
  const sy = linearScale(yEdges[0]!, yEdges[yEdges.length - 1]!, rect.bottom, rect.top);

  const body: string[] = [];
  for (let j = 0; j < deltas.length; j++) {
    for (let i = 0; i < lambdas.length; i++) {
      const xA = sx(xEdges[i]!);
      const xB = sx(xEdges[i + 1]!);
      const yA = sy(yEdges[j + 1]!);
      const yB = sy(yEdges[j]!);
      body.push(
        el("rect", {
          x: xA,
          y: yA,
          width: xB - xA,
          height: yB - yA,
          fill: ramp(grid[j]![i]!),
        })
      );
    }
  }

  for (const seg of contourSegments(lambdas, deltas, grid, CONTOUR_SPLITTING)) {
    body.push(
      el("line", {
        x1: sx(seg.x0),
        y1: sy(seg.y0),
        x2: sx(seg.x1),
        y2: sy(seg.y1),
        stroke: "#ffffff",
        "stroke-width": "2.00",
        "stroke-dasharray": "6 4",
      })
    );
  }

  body.push(
    axes({
      sx,
      sy,
      xTicks: niceTicks(lambdas[0]!, lambdas[lambdas.length - 1]!, 5),
      yTicks: niceTicks(deltas[0]!, deltas[deltas.length - 1]!, 5),
      xLabel: labels.xLabel ?? "coupling / qubit frequency",
      yLabel: labels.yLabel ?? "detuning / qubit frequency",
      rect,
      gridLines: false,
    })
  );

  // colour bar with the contour level marked on it
  const barX = rect.right + 26;
  const steps = 64;
  for (let k = 0; k < steps; k++) {
    const yTop = rect.top + ((steps - 1 - k) * (rect.bottom - rect.top)) / steps;
    body.push(
      el("rect", {
        x: barX,
        y: yTop,
        width: barWidth,
        height: (rect.bottom - rect.top) / steps + 0.5,
        fill: colorRamp((k + 0.5) / steps),
      })
    );
  }
  body.push(
    el("rect", {
      x: barX,
      y: rect.top,
      width: barWidth,
      height: rect.bottom - rect.top,
      fill: "none",
      stroke: "#444",
      "stroke-width": "1",
    })
  );
  body.push(
    text(barX + barWidth + 4, rect.bottom + 4, (10 ** logLo).toExponential(1), {
      "font-size": "11",
    })
  );
  body.push(
    text(barX + barWidth + 4, rect.top + 4, (10 ** logHi).toExponential(1), {
      "font-size": "11",
    })
  );
  if (CONTOUR_SPLITTING >= 10 ** logLo && CONTOUR_SPLITTING <= 10 ** logHi) {
    const tIso = (Math.log10(CONTOUR_SPLITTING) - logLo) / (logHi - logLo);
    const yIso = rect.bottom - tIso * (rect.bottom - rect.top);
    body.push(
      el("line", {
        x1: barX,
        y1: yIso,
        x2: barX + barWidth,
        y2: yIso,
        stroke: "#ffffff",
        "stroke-width": "2.00",
        "stroke-dasharray": "4 3",
      })
    );
    body.push(
      text(barX + barWidth + 4, yIso + 4, CONTOUR_SPLITTING.toExponential(0), {
        "font-size": "11",
      })
    );
  }
  body.push(text(barX - 4, rect.top - 10, "splitting", { "font-size": "12" }));
  return svgDocument(body, "Hybridization splitting map");
}

// ---------------------------------------------------------------------------
// entry points

/** Render one parsed table to SVG text. */
export function renderTable(kind: FigureKind, table: ResultTable, labels: Labels = {}): string {
  if (table.rows.length === 0) {
    throw new SchemaError("no data rows to plot");
  }
  switch (kind) {
    case "levels":
      return renderLevels(table, labels);
    case "fidelity":
      return renderFidelity(table, labels);
    case "evolution":
      return renderEvolution(table, labels);
    case "d_curves":
      return renderDCurves(table, labels);
    case "heatmap":
      return renderHeatmap(table, labels);
  }
}

/** Render spec.input (CSV) to spec.output (SVG file). */
export function renderFile(spec: FigureSpec): void {
  const table = parseResultCsv(readFileSync(spec.input, "utf-8"));
  const svg = renderTable(spec.kind, table, { xLabel: spec.xLabel, yLabel: spec.yLabel });
  writeFileSync(spec.output, svg);
}
