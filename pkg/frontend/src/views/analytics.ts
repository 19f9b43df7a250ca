import { renderChart } from "../chart.js";
import type { AnalyticsResponse } from "../types.js";
import { esc } from "./html.js";

export function renderAnalytics(
  userIds: string[],
  selected: string | null,
  analytics: AnalyticsResponse | null,
): string {
  const options = userIds
    .map((id) => `<option value="${esc(id)}" ${id === selected ? "selected" : ""}>${esc(id)}</option>`)
    .join("");
  const picker = `
  <label for="analytics-user">User</label>
  <select id="analytics-user" data-action="select-analytics-user">
    <option value="" ${selected ? "" : "selected"}>choose…</option>${options}
  </select>`;
  if (!selected || analytics === null) {
    return `${picker}<p class="empty-state">Select a user to chart their confidence level.</p>`;
  }
  if (analytics.history.length === 0) {
    return `${picker}<p class="empty-state">No transactions yet for ${esc(selected)}.</p>`;
  }
  const levels = analytics.history.map((h) => h.level);
  const grants = analytics.history.filter(
    (h) => h.level >= analytics.gate,
  ).length;
  const meta = `
  <p class="analytics-meta">
    ${analytics.history.length} transactions, current level
    ${analytics.level === null ? "&mdash;" : esc(analytics.level.toFixed(2)) + "%"},
    ${grants} at or above the ${esc(analytics.gate)}% gate
  </p>`;
  return picker + meta + `<div class="chart">${renderChart(levels, analytics.gate)}</div>`;
}
