/** Bootstrap: wires the API client, pollers, and renderers to the page.
 * This is the only module that touches the DOM directly. */

import { ApiClient } from "./api.js";
import { submitFeedback } from "./feedback.js";
import { layoutGraph } from "./graphLayout.js";
import { buildHeatmapGrid } from "./heatmap.js";
import { metricsRows, sessionView, traceSeries } from "./model.js";
import { createPoller } from "./poll.js";
import {
  renderChecks,
  renderError,
  renderGraphSvg,
  renderHeatmap,
  renderNotice,
  renderSessionHeader,
  renderSessionList,
  renderTimeline,
  renderTraceSvg,
} from "./render.js";

function apiBase(): string {
  const params = new URLSearchParams(window.location.search);
  return params.get("api") ?? window.location.origin;
}

const client = new ApiClient(apiBase());

const el = (id: string): HTMLElement => {
  const node = document.getElementById(id);
  if (!node) {
    throw new Error(`missing #${id}`);
  }
  return node;
};

let selectedSession: string | null = null;
let selectedIteration: number | null = null;

async function refreshList(): Promise<void> {
  try {
    const sessions = await client.listSessions();
    el("session-list").innerHTML = renderSessionList(sessions);
  } catch (err) {
    el("session-list").innerHTML = renderError(String(err));
  }
}

async function refreshDetail(): Promise<void> {
  if (!selectedSession) {
    return;
  }
  try {
    const session = await client.getSession(selectedSession);
    const vm = sessionView(session);
    el("session-header").innerHTML = renderSessionHeader(vm);
    el("timeline").innerHTML = renderTimeline(vm.timeline);
    el("checks").innerHTML = renderChecks(vm.latestChecks);
    (el("feedback-form") as HTMLFormElement).style.display = vm.canSubmitFeedback
      ? "block"
      : "none";
    if (selectedIteration !== null) {
      await showIteration(selectedIteration);
    }
    try {
      const graph = await client.getGraph(selectedSession);
      el("graph").innerHTML = renderGraphSvg(layoutGraph(graph));
    } catch {
      el("graph").innerHTML = renderNotice("No parseable netlist yet.");
    }
  } catch (err) {
    el("session-header").innerHTML = renderError(String(err));
  }
}

async function showIteration(index: number): Promise<void> {
  if (!selectedSession) {
    return;
  }
  selectedIteration = index;
  try {
    const detail = await client.getIteration(selectedSession, index);
    el("iteration-checks").innerHTML = renderChecks(
      detail.checks.map((c) => ({
        metric: c.objective.metric,
        target: `${c.objective.comparator} ${c.objective.target}`,
        measured: c.measured === null ? "not measured" : String(c.measured),
        status: c.status,
        deviation: c.deviation_pct === null ? "" : `${c.deviation_pct.toFixed(1)}%`,
      })),
    );
    el("traces").innerHTML = traceSeries(detail)
      .map((s) => renderTraceSvg(s))
      .join("");
    el("metrics").textContent = metricsRows(detail)
      .map((m) => `${m.name} = ${m.value}`)
      .join("\n");
  } catch (err) {
    el("traces").innerHTML = renderError(String(err));
  }
}

async function refreshHeatmap(): Promise<void> {
  try {
    const entries = await client.benchSummaries();
    if (entries.length === 0) {
      el("heatmap").innerHTML = renderNotice("No benchmark summaries available.");
      return;
    }
    const stageSelect = el("heatmap-stage") as HTMLSelectElement;
    const entry = entries[entries.length - 1];
    const cells = entry.summary.matrices[stageSelect.value] ?? [];
    el("heatmap").innerHTML = renderHeatmap(
      buildHeatmapGrid(cells, entry.summary.runs_per_problem),
    );
  } catch (err) {
    el("heatmap").innerHTML = renderError(String(err));
  }
}

function wireEvents(): void {
  el("session-list").addEventListener("click", (event) => {
    const target = (event.target as HTMLElement).closest("li[data-id]");
    if (target) {
      selectedSession = target.getAttribute("data-id");
      selectedIteration = null;
      void refreshDetail();
    }
  });
  el("timeline").addEventListener("click", (event) => {
    const target = (event.target as HTMLElement).closest("li[data-index]");
    if (target) {
      void showIteration(Number(target.getAttribute("data-index")));
    }
  });
  (el("feedback-form") as HTMLFormElement).addEventListener("submit", (event) => {
    event.preventDefault();
    const input = el("feedback-text") as HTMLTextAreaElement;
    if (!selectedSession) {
      return;
    }
    void submitFeedback(client, selectedSession, input.value).then((outcome) => {
      el("feedback-notice").innerHTML = outcome.notice
        ? renderNotice(outcome.notice)
        : "";
      if (outcome.submitted) {
        input.value = "";
        void refreshDetail();
      }
    });
  });
  el("heatmap-stage").addEventListener("change", () => void refreshHeatmap());
}

function start(): void {
  wireEvents();
  createPoller(refreshList).start();
  createPoller(refreshDetail).start();
  void refreshHeatmap();
}

document.addEventListener("DOMContentLoaded", start);
