/** Pure view-model builders. Every rendered number comes straight from an
 * API payload field; nothing is recomputed client-side. */

import type {
  IterationBadge,
  IterationDetail,
  ObjectiveCheck,
  SessionSummary,
  TracePayload,
} from "./api.js";

export interface TimelineRow {
  index: number;
  status: string;
  badge: "ok" | "failed" | "all-met";
  label: string;
}

export function sessionTimeline(session: SessionSummary): TimelineRow[] {
  return session.iterations.map((it: IterationBadge) => ({
    index: it.index,
    status: it.status,
    badge: it.status.startsWith("failed") ? "failed" : it.all_met ? "all-met" : "ok",
    label: `#${it.index} ${it.status}${it.all_met ? " (all objectives met)" : ""}`,
  }));
}

export interface CheckRow {
  metric: string;
  target: string;
  measured: string;
  status: string;
  deviation: string;
}

export function checksTable(checks: ObjectiveCheck[]): CheckRow[] {
  return checks.map((c) => ({
    metric: c.objective.metric,
    target: `${c.objective.comparator} ${c.objective.target}`,
    measured: c.measured === null ? "not measured" : String(c.measured),
    status: c.status,
    deviation: c.deviation_pct === null ? "" : `${c.deviation_pct.toFixed(1)}%`,
  }));
}

export interface TraceSeries {
  name: string;
  sweepVariable: string;
  sweepUnit: string;
  /** [x, y] pairs exactly as served (a third element, when present, is the
   * imaginary part and is not displayed). */
  points: [number, number][];
}

export function traceSeries(detail: IterationDetail): TraceSeries[] {
  const waveforms = detail.run?.waveforms;
  if (!waveforms) {
    return [];
  }
  return Object.entries(waveforms).map(([name, trace]: [string, TracePayload]) => ({
    name,
    sweepVariable: trace.sweep_variable,
    sweepUnit: trace.sweep_unit,
    points: trace.points.map((p) => [p[0], p[1]] as [number, number]),
  }));
}

export interface SessionVm {
  id: string;
  state: string;
  outcome: string | null;
  empty: boolean;
  timeline: TimelineRow[];
  latestChecks: CheckRow[];
  canSubmitFeedback: boolean;
}

export function sessionView(session: SessionSummary): SessionVm {
  return {
    id: session.id,
    state: session.state,
    outcome: session.outcome,
    empty: session.iterations.length === 0,
    timeline: sessionTimeline(session),
    latestChecks: checksTable(session.latest_checks),
    canSubmitFeedback: session.state === "awaiting_feedback",
  };
}

export function userTurns(detail: IterationDetail): string[] {
  return detail.exchange.request.filter((m) => m.role === "user").map((m) => m.content);
}

export interface MetricRow {
  name: string;
  value: number;
}

export function metricsRows(detail: IterationDetail): MetricRow[] {
  return Object.entries(detail.metrics)
    .sort(([a], [b]) => a.localeCompare(b))
    .map(([name, value]) => ({ name, value }));
}
