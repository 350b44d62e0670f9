/**
 * Sweep chart: one CPF line per category over the swept axis, rendered as a
 * self-contained SVG. Hover points carry exactly the text the CLI's sweep
 * CSV would print for that row (fixture-pinned).
 */

import { sig6 } from "./format.js";
import type { SweepData, SweepRowDoc } from "./types.js";

export interface SeriesPoint {
  x: number;
  y: number;
  tooltip: string; // the CSV row for this point
}

export interface Series {
  category: string;
  /** Contiguous runs of valid points; error rows break the line. */
  segments: SeriesPoint[][];
  errors: { x: number; note: string }[];
}

export function csvRow(row: SweepRowDoc): string {
  if (row.error !== null) {
    return `${sig6(row.axis_value)},${row.category},,,,,,,error: ${row.error}`;
  }
  return [
    sig6(row.axis_value),
    row.category,
    sig6(row.collision!),
    sig6(row.overhearing!),
    sig6(row.idle!),
    sig6(row.overhead!),
    sig6(row.total_energy!),
    sig6(row.delay!),
    sig6(row.cpf!),
  ].join(",");
}

export function buildSeries(data: SweepData): Series[] {
  const byCategory = new Map<string, SweepRowDoc[]>();
  for (const row of data.rows) {
    const list = byCategory.get(row.category) ?? [];
    list.push(row);
    byCategory.set(row.category, list);
  }
  const out: Series[] = [];
  for (const [category, rows] of byCategory) {
    const segments: SeriesPoint[][] = [];
    const errors: Series["errors"] = [];
    let current: SeriesPoint[] = [];
    for (const row of rows) {
      if (row.error !== null || row.cpf === null) {
        if (current.length) segments.push(current);
        current = [];
        errors.push({ x: row.axis_value, note: row.error ?? "not evaluated" });
        continue;
      }
      current.push({ x: row.axis_value, y: row.cpf, tooltip: csvRow(row) });
    }
    if (current.length) segments.push(current);
    out.push({ category, segments, errors });
  }
  return out;
}

const COLORS: Record<string, string> = {
  ScP: "#2563eb",
  CAP: "#dc2626",
  PSP: "#059669",
};

export function chartSvg(
  data: SweepData | null,
  width = 640,
  height = 320,
): string {
  if (data === null || data.rows.length === 0) {
    return (
      `<svg viewBox="0 0 ${width} ${height}" class="sweep-chart">` +
      `<text x="${width / 2}" y="${height / 2}" text-anchor="middle" ` +
      `class="empty">no sweep yet - pick an axis and run one</text></svg>`
    );
  }
  const series = buildSeries(data);
  const points = series.flatMap((s) => s.segments.flat());
  if (points.length === 0) {
    return chartSvg(null, width, height);
  }
  const pad = 40;
  const xs = points.map((p) => p.x);
  const ys = points.map((p) => p.y);
  const xMin = Math.min(...xs);
  const xMax = Math.max(...xs);
  const yMin = 0;
  const yMax = Math.max(...ys) * 1.05;
  const sx = (x: number) =>
    pad + ((x - xMin) / (xMax - xMin || 1)) * (width - 2 * pad);
  const sy = (y: number) =>
    height - pad - ((y - yMin) / (yMax - yMin || 1)) * (height - 2 * pad);

  const parts: string[] = [
    `<svg viewBox="0 0 ${width} ${height}" class="sweep-chart">`,
    `<line x1="${pad}" y1="${height - pad}" x2="${width - pad}" ` +
      `y2="${height - pad}" class="axis"/>`,
    `<line x1="${pad}" y1="${pad}" x2="${pad}" y2="${height - pad}" class="axis"/>`,
    `<text x="${width / 2}" y="${height - 8}" text-anchor="middle" class="axis-label">` +
      `${data.axis}</text>`,
    `<text x="12" y="${height / 2}" class="axis-label" ` +
      `transform="rotate(-90 12 ${height / 2})">CPF</text>`,
  ];
  for (const s of series) {
    const color = COLORS[s.category] ?? "#666";
    for (const segment of s.segments) {
      const path = segment
        .map((p) => `${sx(p.x).toFixed(1)},${sy(p.y).toFixed(1)}`)
        .join(" ");
      parts.push(
        `<polyline fill="none" stroke="${color}" stroke-width="2" ` +
          `points="${path}" data-category="${s.category}"/>`,
      );
      for (const p of segment) {
        parts.push(
          `<circle cx="${sx(p.x).toFixed(1)}" cy="${sy(p.y).toFixed(1)}" r="4" ` +
            `fill="${color}" data-category="${s.category}">` +
            `<title>${p.tooltip}</title></circle>`,
        );
      }
    }
    for (const err of s.errors) {
      parts.push(
        `<text x="${sx(err.x).toFixed(1)}" y="${pad}" class="series-error" ` +
          `fill="${color}">&times;<title>${s.category} @ ${sig6(err.x)}: ` +
          `${err.note}</title></text>`,
      );
    }
  }
  parts.push("</svg>");
  return parts.join("");
}
