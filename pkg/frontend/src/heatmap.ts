/** Benchmark heatmap grid: category rows by problem columns.
 * Categories have different problem counts, so shorter rows are padded
 * with null cells that render grey for visual consistency. */

import type { MatrixCell } from "./api.js";

export interface HeatCell {
  problemId: number;
  successes: number;
  runs: number;
}

export interface HeatRow {
  category: string;
  cells: (HeatCell | null)[];
}

export interface HeatmapGrid {
  rows: HeatRow[];
  columns: number;
  runsPerProblem: number;
}

export function buildHeatmapGrid(cells: MatrixCell[], runsPerProblem: number): HeatmapGrid {
  const byCategory = new Map<string, HeatCell[]>();
  const order: string[] = [];
  const sorted = [...cells].sort((a, b) => a.problem_id - b.problem_id);
  for (const cell of sorted) {
    if (!byCategory.has(cell.category)) {
      byCategory.set(cell.category, []);
      order.push(cell.category);
    }
    byCategory.get(cell.category)!.push({
      problemId: cell.problem_id,
      successes: cell.successes,
      runs: runsPerProblem,
    });
  }
  const columns = Math.max(0, ...[...byCategory.values()].map((row) => row.length));
  const rows: HeatRow[] = order.map((category) => {
    const filled = byCategory.get(category)!;
    const pads = new Array<null>(columns - filled.length).fill(null);
    return { category, cells: [...filled, ...pads] };
  });
  return { rows, columns, runsPerProblem };
}

/** Shade bucket for a cell; pads have their own class. */
export function cellClass(cell: HeatCell | null): string {
  if (cell === null) {
    return "heat-pad";
  }
  if (cell.runs === 0) {
    return "heat-0";
  }
  const ratio = cell.successes / cell.runs;
  if (ratio === 0) return "heat-0";
  if (ratio < 0.5) return "heat-1";
  if (ratio < 1) return "heat-2";
  return "heat-3";
}
