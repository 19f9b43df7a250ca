/** Confidence time-series chart rendered as plain SVG markup.
 *
 * Geometry helpers are exported separately so the placement of the polyline
 * and the gate reference line is testable without a DOM. */

export interface ChartGeometry {
  width: number;
  height: number;
  marginLeft: number;
  marginRight: number;
  marginTop: number;
  marginBottom: number;
}

export const DEFAULT_GEOMETRY: ChartGeometry = {
  width: 720,
  height: 320,
  marginLeft: 44,
  marginRight: 12,
  marginTop: 12,
  marginBottom: 28,
};

function plotWidth(geometry: ChartGeometry): number {
  return geometry.width - geometry.marginLeft - geometry.marginRight;
}

function plotHeight(geometry: ChartGeometry): number {
  return geometry.height - geometry.marginTop - geometry.marginBottom;
}

export function xForIndex(index: number, count: number, geometry: ChartGeometry): number {
  const step = count > 1 ? plotWidth(geometry) / (count - 1) : 0;
  return geometry.marginLeft + index * step;
}

/** Levels are percentages: 0 maps to the plot bottom, 100 to the top. */
export function yForLevel(level: number, geometry: ChartGeometry): number {
  return geometry.marginTop + (1 - level / 100) * plotHeight(geometry);
}

export function levelPolylinePoints(levels: number[], geometry: ChartGeometry): string {
  return levels
    .map((level, i) => `${xForIndex(i, levels.length, geometry).toFixed(2)},${yForLevel(level, geometry).toFixed(2)}`)
    .join(" ");
}

export interface LineSegment {
  x1: number;
  y1: number;
  x2: number;
  y2: number;
}

export function gateLineSegment(gate: number, geometry: ChartGeometry): LineSegment {
  const y = yForLevel(gate, geometry);
  return {
    x1: geometry.marginLeft,
    y1: y,
    x2: geometry.width - geometry.marginRight,
    y2: y,
  };
}

export function renderChart(
  levels: number[],
  gate: number,
  geometry: ChartGeometry = DEFAULT_GEOMETRY,
): string {
  const g = geometry;
  const gateSeg = gateLineSegment(gate, g);
  const axes = [0, 25, 50, 75, 100]
    .map((tick) => {
      const y = yForLevel(tick, g).toFixed(2);
      return (
        `<line x1="${g.marginLeft}" y1="${y}" x2="${g.width - g.marginRight}" y2="${y}" class="grid-line"/>` +
        `<text x="${g.marginLeft - 6}" y="${y}" class="tick-label" text-anchor="end" dominant-baseline="middle">${tick}</text>`
      );
    })
    .join("");
  const polyline =
    levels.length > 0
      ? `<polyline class="level-line" fill="none" points="${levelPolylinePoints(levels, g)}"/>`
      : "";
  const gateLine =
    `<line class="gate-line" x1="${gateSeg.x1}" y1="${gateSeg.y1.toFixed(2)}" ` +
    `x2="${gateSeg.x2}" y2="${gateSeg.y2.toFixed(2)}" data-gate="${gate}"/>` +
    `<text x="${g.width - g.marginRight}" y="${(gateSeg.y1 - 4).toFixed(2)}" ` +
    `class="gate-label" text-anchor="end">gate ${gate}%</text>`;
  return (
    `<svg viewBox="0 0 ${g.width} ${g.height}" width="${g.width}" height="${g.height}" ` +
    `role="img" aria-label="confidence level over transactions">` +
    axes +
    gateLine +
    polyline +
    `</svg>`
  );
}
