/** Deterministic SVG primitives: fixed canvas, fixed fonts, no randomness. */

export const WIDTH = 720;
export const HEIGHT = 480;
export const MARGIN = { top: 34, right: 28, bottom: 56, left: 80 };
export const FONT = "Helvetica, Arial, sans-serif";

export const PALETTE = {
  blue: "#1f77b4",
  orange: "#ff7f0e",
  green: "#2ca02c",
  red: "#d62728",
  purple: "#9467bd",
  grey: "#7f7f7f",
};

/** Pixel coordinate as a stable short string. */
export function px(v: number): string {
  const s = v.toFixed(2);
  return s === "-0.00" ? "0.00" : s;
}

export function escapeXml(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

/** One SVG element; attribute order follows the given object. */
export function el(
  name: string,
  attrs: Record<string, string | number>,
  ...children: string[]
): string {
  const parts = [name];
  for (const [key, value] of Object.entries(attrs)) {
    const rendered = typeof value === "number" ? px(value) : value;
    parts.push(`${key}="${rendered}"`);
  }
  if (children.length === 0) return `<${parts.join(" ")}/>`;
  return `<${parts.join(" ")}>${children.join("")}</${name}>`;
}

export function text(
  x: number,
  y: number,
  content: string,
  attrs: Record<string, string | number> = {}
): string {
  return el(
    "text",
    { x, y, "font-family": FONT, "font-size": "13", fill: "#222", ...attrs },
    escapeXml(content)
  );
}

export type Scale = (value: number) => number;

export function linearScale(d0: number, d1: number, r0: number, r1: number): Scale {
  const span = d1 - d0;
  if (span === 0) return () => 0.5 * (r0 + r1);
  return (v: number) => r0 + ((v - d0) / span) * (r1 - r0);
}

/** Round tick positions covering [lo, hi] with a 1/2/5 step. */
export function niceTicks(lo: number, hi: number, target = 6): number[] {
  if (!(hi > lo)) return [lo];
  const raw = (hi - lo) / Math.max(1, target);
  const power = Math.floor(Math.log10(raw));
  const base = 10 ** power;
  let step = base;
  for (const mult of [1, 2, 5, 10]) {
    step = mult * base;
    if (step >= raw) break;
  }
  const ticks: number[] = [];
  let v = Math.ceil(lo / step - 1e-9) * step;
  while (v <= hi + 1e-9 * step) {
    ticks.push(Math.round(v / step) * step);
    v += step;
  }
  return ticks;
}

/** Label for a tick value, sized to the spacing of its neighbours. */
export function tickLabel(value: number, step: number): string {
  if (value === 0) return "0";
  const magnitude = Math.abs(value);
  if (magnitude >= 1e4 || magnitude < 1e-3) return value.toExponential(1);
  const decimals = Math.max(0, -Math.floor(Math.log10(step) + 1e-9));
  return value.toFixed(Math.min(decimals, 6));
}

export interface Rect {
  left: number;
  right: number;
  top: number;
  bottom: number;
}

/** Plot area in pixels; rightInset reserves extra room (e.g. a colorbar). */
export function plotRect(rightInset = 0): Rect {
  return {
    left: MARGIN.left,
    right: WIDTH - MARGIN.right - rightInset,
    top: MARGIN.top,
    bottom: HEIGHT - MARGIN.bottom,
  };
}

export interface AxisSpec {
  sx: Scale;
  sy: Scale;
  xTicks: number[];
  yTicks: number[];
  xLabel: string;
  yLabel: string;
  rect?: Rect;
  gridLines?: boolean;
}

/** Frame, grid lines, tick marks and axis labels around the plot area. */
export function axes(spec: AxisSpec): string {
  const { sx, sy, xTicks, yTicks, xLabel, yLabel } = spec;
  const { left, right, top, bottom } = spec.rect ?? plotRect();
  const grid = spec.gridLines ?? true;
  const parts: string[] = [];

  const xStep = xTicks.length > 1 ? xTicks[1]! - xTicks[0]! : 1;
  const yStep = yTicks.length > 1 ? yTicks[1]! - yTicks[0]! : 1;
  for (const t of xTicks) {
    const x = sx(t);
    if (grid) {
      parts.push(
        el("line", { x1: x, y1: top, x2: x, y2: bottom, stroke: "#ddd", "stroke-width": "1" })
      );
    } else {
      parts.push(
        el("line", { x1: x, y1: bottom, x2: x, y2: bottom + 5, stroke: "#444", "stroke-width": "1" })
      );
    }
    parts.push(
      text(x, bottom + 18, tickLabel(t, xStep), { "text-anchor": "middle" })
    );
  }
  for (const t of yTicks) {
    const y = sy(t);
    if (grid) {
      parts.push(
        el("line", { x1: left, y1: y, x2: right, y2: y, stroke: "#ddd", "stroke-width": "1" })
      );
    } else {
      parts.push(
        el("line", { x1: left - 5, y1: y, x2: left, y2: y, stroke: "#444", "stroke-width": "1" })
      );
    }
    parts.push(
      text(left - 8, y + 4, tickLabel(t, yStep), { "text-anchor": "end" })
    );
  }
  parts.push(
    el("rect", {
      x: left,
      y: top,
      width: right - left,
      height: bottom - top,
      fill: "none",
      stroke: "#444",
      "stroke-width": "1",
    })
  );
  parts.push(
    text(0.5 * (left + right), HEIGHT - 14, xLabel, {
      "text-anchor": "middle",
      "font-size": "14",
    })
  );
  parts.push(
    el(
      "g",
      { transform: `translate(20 ${px(0.5 * (top + bottom))}) rotate(-90)` },
      text(0, 0, yLabel, { "text-anchor": "middle", "font-size": "14" })
    )
  );
  return parts.join("");
}

export interface LineOpts {
  width?: number;
  dash?: string;
}

export function polyline(
  xs: number[],
  ys: number[],
  stroke: string,
  opts: LineOpts = {}
): string {
  const points = xs.map((x, i) => `${px(x)},${px(ys[i]!)}`).join(" ");
  const attrs: Record<string, string | number> = {
    points,
    fill: "none",
    stroke,
    "stroke-width": px(opts.width ?? 1.8),
  };
  if (opts.dash) attrs["stroke-dasharray"] = opts.dash;
  return el("polyline", attrs);
}

export interface LegendEntry {
  label: string;
  color: string;
  dash?: string;
}

export function legend(x: number, y: number, entries: LegendEntry[]): string {
  const lineHeight = 18;
  const parts: string[] = [
    el("rect", {
      x,
      y,
      width: 150,
      height: entries.length * lineHeight + 10,
      fill: "#fff",
      "fill-opacity": "0.85",
      stroke: "#bbb",
      "stroke-width": "1",
    }),
  ];
  entries.forEach((entry, i) => {
    const cy = y + 14 + i * lineHeight;
    const attrs: Record<string, string | number> = {
      x1: x + 8,
      y1: cy - 4,
      x2: x + 34,
      y2: cy - 4,
      stroke: entry.color,
      "stroke-width": "2.00",
    };
    if (entry.dash) attrs["stroke-dasharray"] = entry.dash;
    parts.push(el("line", attrs));
    parts.push(text(x + 40, cy, entry.label, { "font-size": "12" }));
  });
  return parts.join("");
}

/** Wrap body fragments into a standalone SVG document. */
export function svgDocument(body: string[], title: string): string {
  return el(
    "svg",
    {
      xmlns: "http://www.w3.org/2000/svg",
      width: String(WIDTH),
      height: String(HEIGHT),
      viewBox: `0 0 ${WIDTH} ${HEIGHT}`,
    },
    el("rect", { x: 0, y: 0, width: WIDTH, height: HEIGHT, fill: "#ffffff" }),
    text(MARGIN.left, 20, title, { "font-size": "15", "font-weight": "bold" }),
    ...body
  );
}

function lerpChannel(a: number, b: number, t: number): number {
  return Math.round(a + (b - a) * t);
}

function hexToRgb(hex: string): [number, number, number] {
  return [
    parseInt(hex.slice(1, 3), 16),
    parseInt(hex.slice(3, 5), 16),
    parseInt(hex.slice(5, 7), 16),
  ];
}

const COLOR_STOPS = ["#440154", "#21918c", "#fde725"].map(hexToRgb);

/** Perceptual-ish dark-to-bright colour for t in [0, 1]. */
export function colorRamp(t: number): string {
  const clamped = Math.min(1, Math.max(0, t));
  const scaled = clamped * (COLOR_STOPS.length - 1);
  const k = Math.min(COLOR_STOPS.length - 2, Math.floor(scaled));
  const frac = scaled - k;
  const [r0, g0, b0] = COLOR_STOPS[k]!;
  const [r1, g1, b1] = COLOR_STOPS[k + 1]!;
  const rgb = [
    lerpChannel(r0, r1, frac),
    lerpChannel(g0, g1, frac),
    lerpChannel(b0, b1, frac),
  ];
  return "#" + rgb.map((c) => c.toString(16).padStart(2, "0")).join("");
}

export interface Segment {
  x0: number;
  y0: number;
  x1: number;
  y1: number;
}

/**
 * Iso-level line segments (marching squares) for values[row][col] sampled at
 * ys[row] x xs[col].  Cells touching a non-finite value are skipped.
 */
export function contourSegments(
  xs: number[],
  ys: number[],
  values: number[][],
  iso: number
): Segment[] {
  const segments: Segment[] = [];
  for (let j = 0; j + 1 < ys.length; j++) {
    for (let i = 0; i + 1 < xs.length; i++) {
      const v00 = values[j]![i]!;
      const v10 = values[j]![i + 1]!;
      const v01 = values[j + 1]![i]!;
      const v11 = values[j + 1]![i + 1]!;
      if (![v00, v10, v01, v11].every(Number.isFinite)) continue;

      const x0 = xs[i]!;
      const x1 = xs[i + 1]!;
      const y0 = ys[j]!;
      const y1 = ys[j + 1]!;
      const frac = (a: number, b: number) => (iso - a) / (b - a);

      // crossing points on the four cell edges, when present
      const bottom = (v00 >= iso) !== (v10 >= iso)
        ? { x: x0 + frac(v00, v10) * (x1 - x0), y: y0 }
        : null;
      const top = (v01 >= iso) !== (v11 >= iso)
        ? { x: x0 + frac(v01, v11) * (x1 - x0), y: y1 }
        : null;
      const leftEdge = (v00 >= iso) !== (v01 >= iso)
        ? { x: x0, y: y0 + frac(v00, v01) * (y1 - y0) }
        : null;
      const rightEdge = (v10 >= iso) !== (v11 >= iso)
        ? { x: x1, y: y0 + frac(v10, v11) * (y1 - y0) }
        : null;

      const crossings = [bottom, top, leftEdge, rightEdge].filter(
        (p): p is { x: number; y: number } => p !== null
      );
      if (crossings.length === 2) {
        segments.push({
          x0: crossings[0]!.x,
          y0: crossings[0]!.y,
          x1: crossings[1]!.x,
          y1: crossings[1]!.y,
        });
      } else if (crossings.length === 4) {
        // saddle: split by the cell-centre value for a deterministic choice
        const centre = 0.25 * (v00 + v10 + v01 + v11);
        if ((centre >= iso) === (v00 >= iso)) {
          segments.push({ x0: bottom!.x, y0: bottom!.y, x1: rightEdge!.x, y1: rightEdge!.y });
          segments.push({ x0: leftEdge!.x, y0: leftEdge!.y, x1: top!.x, y1: top!.y });
        } else {
          segments.push({ x0: bottom!.x, y0: bottom!.y, x1: leftEdge!.x, y1: leftEdge!.y });
          segments.push({ x0: rightEdge!.x, y0: rightEdge!.y, x1: top!.x, y1: top!.y });
        }
      }
    }
  }
  return segments;
}
