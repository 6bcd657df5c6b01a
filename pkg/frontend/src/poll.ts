/** Fixed-interval polling with overlap suppression: if a tick is still in
 * flight when the next interval fires, the new tick is skipped, so each
 * session has at most one request outstanding. */

export const POLL_INTERVAL_MS = 2000;

export interface Poller {
  start(): void;
  stop(): void;
  /** True while a tick is running; exposed for tests. */
  busy(): boolean;
}

export function createPoller(
  tick: () => Promise<void>,
  intervalMs: number = POLL_INTERVAL_MS,
  schedule: (fn: () => void, ms: number) => unknown = (fn, ms) => setInterval(fn, ms),
  cancel: (handle: unknown) => void = (handle) => clearInterval(handle as never),
): Poller {
  let handle: unknown = null;
  let inFlight = false;

  const run = () => {
    if (inFlight) {
      return;
    }
    inFlight = true;
    tick()
      .catch(() => undefined)
      .finally(() => {
        inFlight = false;
      });
  };

  return {
    start() {
      if (handle === null) {
        handle = schedule(run, intervalMs);
        run();
      }
    },
    stop() {
      if (handle !== null) {
        cancel(handle);
        handle = null;
      }
    },
    busy() {
      return inFlight;
    },
  };
}
