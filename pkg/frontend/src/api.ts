/** Typed client for the session service. All requests stay on the
 * configured origin; the dashboard never computes metrics itself, it only
 * displays payload fields. */

export interface Objective {
  metric: string;
  comparator: string;
  target: number;
  tolerance?: number | null;
  at_frequency?: number | null;
}

export interface ObjectiveCheck {
  objective: Objective;
  measured: number | null;
  status: "met" | "unmet" | "unmeasurable";
  deviation_pct: number | null;
}

export interface IterationBadge {
  index: number;
  status: string;
  all_met: boolean;
}

export interface SessionSummary {
  id: string;
  state: "running" | "awaiting_feedback" | "done";
  flow: string;
  strategy: { kind: string; n: number };
  outcome: string | null;
  iterations: IterationBadge[];
  latest_checks: ObjectiveCheck[];
  error?: string;
}

export interface TracePayload {
  sweep_variable: string;
  sweep_unit: string;
  points: number[][];
}

export interface StageOutcome {
  stage: string;
  status: "pass" | "fail" | "skipped";
  duration_s: number;
  note?: string;
}

export interface RunPayload {
  stage_outcomes: StageOutcome[];
  report_files: Record<string, string>;
  waveforms: Record<string, TracePayload> | null;
  log_text: string;
}

export interface Message {
  role: "system" | "user" | "assistant";
  content: string;
}

export interface IterationDetail {
  index: number;
  status: string;
  exchange: { request: Message[]; response: string };
  sources: { flow: string; files: Record<string, string>; repairs: string[] } | null;
  violations: { kind: string; subject: string; detail: string }[];
  run: RunPayload | null;
  metrics: Record<string, number>;
  checks: ObjectiveCheck[];
  feedback_out: string | null;
  sweep_rows: { value: number; metrics: Record<string, number>; error: string }[];
}

export interface GraphNode {
  kind: "component" | "net";
  label: string;
}

export interface GraphPayload {
  nodes: GraphNode[];
  edges: { component: string; net: string; terminal: number }[];
  annotations: string[];
  dot: string;
}

export interface MatrixCell {
  category: string;
  problem_id: number;
  successes: number;
}

export interface BenchSummaryEntry {
  name: string;
  summary: {
    runs_per_problem: number;
    at_least_one_pass_pct: Record<string, number>;
    matrices: Record<string, MatrixCell[]>;
  };
}

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private base: string,
    private fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {
    this.base = base.replace(/\/+$/, "");
  }

  url(path: string): string {
    return `${this.base}${path}`;
  }

  private async getJson<T>(path: string): Promise<T> {
    const resp = await this.fetchFn(this.url(path));
    if (!resp.ok) {
      throw new ApiError(resp.status, await safeDetail(resp));
    }
    return (await resp.json()) as T;
  }

  listSessions(): Promise<SessionSummary[]> {
    return this.getJson("/sessions");
  }

  getSession(id: string): Promise<SessionSummary> {
    return this.getJson(`/sessions/${encodeURIComponent(id)}`);
  }

  getIteration(id: string, index: number): Promise<IterationDetail> {
    return this.getJson(`/sessions/${encodeURIComponent(id)}/iterations/${index}`);
  }

  getGraph(id: string): Promise<GraphPayload> {
    return this.getJson(`/sessions/${encodeURIComponent(id)}/graph`);
  }

  benchSummaries(): Promise<BenchSummaryEntry[]> {
    return this.getJson("/bench/summaries");
  }

  createSession(body: unknown): Promise<{ id: string; state: string }> {
    return this.post("/sessions", body) as Promise<{ id: string; state: string }>;
  }

  /** Resume an awaiting interactive session. Resolves with conflict=true on
   * a 409 (session not waiting) so callers can show a notice, not crash. */
  async submitFeedback(
    id: string,
    text: string,
  ): Promise<{ ok: boolean; conflict: boolean; detail: string }> {
    const resp = await this.fetchFn(this.url(`/sessions/${encodeURIComponent(id)}/feedback`), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ text }),
    });
    if (resp.ok) {
      return { ok: true, conflict: false, detail: "" };
    }
    const detail = await safeDetail(resp);
    if (resp.status === 409) {
      return { ok: false, conflict: true, detail };
    }
    throw new ApiError(resp.status, detail);
  }

  async abort(id: string): Promise<void> {
    await this.post(`/sessions/${encodeURIComponent(id)}/abort`, {});
  }

  private async post(path: string, body: unknown): Promise<unknown> {
    const resp = await this.fetchFn(this.url(path), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
    if (!resp.ok) {
      throw new ApiError(resp.status, await safeDetail(resp));
    }
    return resp.json();
  }
}

async function safeDetail(resp: Response): Promise<string> {
  try {
    const body = (await resp.json()) as { detail?: string };
    return body.detail ?? `HTTP ${resp.status}`;
  } catch {
    return `HTTP ${resp.status}`;
  }
}
