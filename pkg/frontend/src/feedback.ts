/** Feedback submission flow for interactive sessions: POST the text, set
 * the optimistic running state, then poll until the session reaches its
 * next wait-point or finishes. A 409 surfaces as a notice, never a crash. */

import type { ApiClient, SessionSummary } from "./api.js";

export interface FeedbackOutcome {
  submitted: boolean;
  notice: string;
  optimisticState: string;
  finalState: string;
  session: SessionSummary | null;
}

export async function submitFeedback(
  client: ApiClient,
  sessionId: string,
  text: string,
  pollIntervalMs = 2000,
  maxPolls = 150,
  sleep: (ms: number) => Promise<void> = (ms) => new Promise((r) => setTimeout(r, ms)),
): Promise<FeedbackOutcome> {
  if (!text.trim()) {
    return {
      submitted: false,
      notice: "Feedback text is empty.",
      optimisticState: "",
      finalState: "",
      session: null,
    };
  }
  const result = await client.submitFeedback(sessionId, text);
  if (!result.ok) {
    return {
      submitted: false,
      notice: result.conflict
        ? `Session is not awaiting feedback: ${result.detail}`
        : result.detail,
      optimisticState: "",
      finalState: "",
      session: null,
    };
  }

  let session: SessionSummary | null = null;
  let finalState = "running";
  for (let i = 0; i < maxPolls; i += 1) {
    session = await client.getSession(sessionId);
    finalState = session.state;
    if (session.state === "awaiting_feedback" || session.state === "done") {
      break;
    }
    await sleep(pollIntervalMs);
  }
  return {
    submitted: true,
    notice: "",
    optimisticState: "running",
    finalState,
    session,
  };
}
