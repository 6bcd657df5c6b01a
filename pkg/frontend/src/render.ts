/** HTML/SVG string renderers over the view models. Pure functions so the
 * views are testable without a browser; main.ts mounts the strings. */

import type { GraphLayout } from "./graphLayout.js";
import type { HeatmapGrid } from "./heatmap.js";
import { cellClass } from "./heatmap.js";
import type { CheckRow, SessionVm, TimelineRow, TraceSeries } from "./model.js";

export function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function renderError(message: string): string {
  return `<div class="error-state">Request failed: ${esc(message)}</div>`;
}

export function renderNotice(message: string): string {
  return `<div class="notice">${esc(message)}</div>`;
}

export function renderEmptyState(): string {
  return `<div class="empty-state">No iterations yet.</div>`;
}

export function renderTimeline(rows: TimelineRow[]): string {
  if (rows.length === 0) {
    return renderEmptyState();
  }
  const items = rows
    .map(
      (row) =>
        `<li class="iteration badge-${row.badge}" data-index="${row.index}">${esc(row.label)}</li>`,
    )
    .join("");
  return `<ol class="timeline">${items}</ol>`;
}

export function renderChecks(rows: CheckRow[]): string {
  if (rows.length === 0) {
    return `<p class="empty-state">No objective checks.</p>`;
  }
  const body = rows
    .map(
      (r) =>
        `<tr class="check-${r.status}"><td>${esc(r.metric)}</td><td>${esc(r.target)}</td>` +
        `<td>${esc(r.measured)}</td><td>${esc(r.status)}</td><td>${esc(r.deviation)}</td></tr>`,
    )
    .join("");
  return (
    `<table class="checks"><thead><tr><th>metric</th><th>target</th>` +
    `<th>measured</th><th>status</th><th>deviation</th></tr></thead>` +
    `<tbody>${body}</tbody></table>`
  );
}

export function renderSessionHeader(vm: SessionVm): string {
  const outcome = vm.outcome ? ` outcome: ${esc(vm.outcome)}` : "";
  return `<header class="session-header"><h2>${esc(vm.id)}</h2><span class="state state-${esc(
    vm.state,
  )}">${esc(vm.state)}</span>${outcome}</header>`;
}

/** One polyline per series; x/y scaling is presentation only. */
export function renderTraceSvg(series: TraceSeries, width = 640, height = 240): string {
  const points = series.points;
  if (points.length === 0) {
    return renderEmptyState();
  }
  const xs = points.map((p) => p[0]);
  const ys = points.map((p) => p[1]);
  const xMin = Math.min(...xs);
  const xMax = Math.max(...xs);
  const yMin = Math.min(...ys);
  const yMax = Math.max(...ys);
  const sx = (x: number) =>
    xMax === xMin ? width / 2 : ((x - xMin) / (xMax - xMin)) * (width - 20) + 10;
  const sy = (y: number) =>
    yMax === yMin ? height / 2 : height - (((y - yMin) / (yMax - yMin)) * (height - 20) + 10);
  const path = points.map((p) => `${sx(p[0]).toFixed(1)},${sy(p[1]).toFixed(1)}`).join(" ");
  return (
    `<figure class="trace" data-name="${esc(series.name)}" data-points="${points.length}">` +
    `<figcaption>${esc(series.name)} (${esc(series.sweepVariable)}, ${esc(series.sweepUnit)})</figcaption>` +
    `<svg viewBox="0 0 ${width} ${height}" role="img"><polyline fill="none" stroke="currentColor" points="${path}"/></svg>` +
    `</figure>`
  );
}

export function renderGraphSvg(layout: GraphLayout): string {
  const edges = layout.edges
    .map(
      (e) =>
        `<line x1="${e.x1}" y1="${e.y1}" x2="${e.x2}" y2="${e.y2}" class="edge" data-terminal="${e.terminal}"/>`,
    )
    .join("");
  const nodes = layout.nodes
    .map((n) => {
      const shape =
        n.kind === "component"
          ? `<rect x="${n.x - 8}" y="${n.y - 8}" width="16" height="16" class="node-component"/>`
          : `<circle cx="${n.x}" cy="${n.y}" r="8" class="node-net"/>`;
      return `<g class="node">${shape}<text x="${n.x + 12}" y="${n.y + 4}">${esc(n.label)}</text></g>`;
    })
    .join("");
  const notes = layout.annotations
    .map((a) => `<div class="annotation">${esc(a)}</div>`)
    .join("");
  return (
    `<div class="netgraph"><svg viewBox="0 0 ${layout.width} ${layout.height}">${edges}${nodes}</svg>` +
    `${notes}</div>`
  );
}

export function renderHeatmap(grid: HeatmapGrid): string {
  const rows = grid.rows
    .map((row) => {
      const cells = row.cells
        .map((cell) => {
          const cls = cellClass(cell);
          if (cell === null) {
            return `<td class="${cls}"></td>`;
          }
          return (
            `<td class="${cls}" data-problem="${cell.problemId}" ` +
            `title="problem ${cell.problemId}">${cell.successes}/${cell.runs}</td>`
          );
        })
        .join("");
      return `<tr><th>${esc(row.category)}</th>${cells}</tr>`;
    })
    .join("");
  return `<table class="heatmap" data-columns="${grid.columns}"><tbody>${rows}</tbody></table>`;
}

export function renderSessionList(
  sessions: { id: string; state: string; outcome: string | null }[],
): string {
  if (sessions.length === 0) {
    return `<p class="empty-state">No sessions.</p>`;
  }
  const items = sessions
    .map(
      (s) =>
        `<li data-id="${esc(s.id)}"><a href="#session/${esc(s.id)}">${esc(s.id)}</a> ` +
        `<span class="state state-${esc(s.state)}">${esc(s.state)}</span></li>`,
    )
    .join("");
  return `<ul class="session-list">${items}</ul>`;
}
