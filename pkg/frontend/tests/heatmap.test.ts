import { describe, expect, it } from "vitest";

import type { BenchSummaryEntry, MatrixCell } from "../src/api.js";
import { buildHeatmapGrid, cellClass } from "../src/heatmap.js";
import { renderHeatmap } from "../src/render.js";
import { loadFixture } from "./helpers.js";

const entries = loadFixture<BenchSummaryEntry[]>("bench_summaries.json");
const summary = entries[0].summary;

describe("heatmap grid from the benchmark fixture", () => {
  const cells = summary.matrices["lut_objective"];
  const grid = buildHeatmapGrid(cells, summary.runs_per_problem);

  it("has twelve category rows covering all 56 problems", () => {
    expect(grid.rows).toHaveLength(12);
    const total = grid.rows.flatMap((r) => r.cells).filter((c) => c !== null).length;
    expect(total).toBe(56);
  });

  it("pads shorter categories to the widest row", () => {
    expect(grid.columns).toBe(8);
    for (const row of grid.rows) {
      expect(row.cells).toHaveLength(grid.columns);
    }
    const pads = grid.rows.flatMap((r) => r.cells).filter((c) => c === null).length;
    expect(pads).toBe(12 * 8 - 56);
  });

  it("cell values equal the API matrix exactly", () => {
    const byId = new Map(cells.map((c) => [c.problem_id, c]));
    for (const row of grid.rows) {
      for (const cell of row.cells) {
        if (cell === null) {
          continue;
        }
        const api = byId.get(cell.problemId)!;
        expect(cell.successes).toBe(api.successes);
        expect(api.category).toBe(row.category);
        expect(cell.runs).toBe(summary.runs_per_problem);
      }
    }
  });

  it("keeps problems ordered within their category row", () => {
    for (const row of grid.rows) {
      const ids = row.cells.filter((c) => c !== null).map((c) => c!.problemId);
      expect(ids).toEqual([...ids].sort((a, b) => a - b));
    }
  });
});

describe("uniform all-pass grid", () => {
  it("renders 5/5 in every cell", () => {
    const cells: MatrixCell[] = [];
    for (let pid = 1; pid <= 6; pid += 1) {
      cells.push({ category: pid <= 3 ? "A" : "B", problem_id: pid, successes: 5 });
    }
    const grid = buildHeatmapGrid(cells, 5);
    const rendered = renderHeatmap(grid);
    const matches = rendered.match(/5\/5/g) ?? [];
    expect(matches).toHaveLength(6);
    for (const row of grid.rows) {
      for (const cell of row.cells) {
        expect(cellClass(cell)).toBe("heat-3");
      }
    }
  });
});

describe("heatmap rendering", () => {
  it("greys pad cells and carries problem ids", () => {
    const grid = buildHeatmapGrid(summary.matrices["implement"], summary.runs_per_problem);
    const html = renderHeatmap(grid);
    expect(html).toContain('class="heat-pad"');
    expect(html).toContain('data-problem="9"');
    const rows = html.match(/<tr>/g) ?? [];
    expect(rows).toHaveLength(12);
  });
});
