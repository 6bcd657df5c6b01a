import { describe, expect, it } from "vitest";

import { POLL_INTERVAL_MS, createPoller } from "../src/poll.js";

function manualScheduler() {
  const ticks: (() => void)[] = [];
  return {
    schedule(fn: () => void, _ms: number) {
      ticks.push(fn);
      return ticks.length - 1;
    },
    cancel(handle: unknown) {
      ticks[handle as number] = () => undefined;
    },
    fire() {
      for (const fn of [...ticks]) {
        fn();
      }
    },
  };
}

describe("poller", () => {
  it("defaults to the two second interval", () => {
    expect(POLL_INTERVAL_MS).toBe(2000);
  });

  it("deduplicates overlapping ticks", async () => {
    let resolveTick: (() => void) | null = null;
    let calls = 0;
    const tick = () =>
      new Promise<void>((resolve) => {
        calls += 1;
        resolveTick = resolve;
      });
    const sched = manualScheduler();
    const poller = createPoller(tick, 2000, sched.schedule, sched.cancel);
    poller.start(); // immediate first tick
    expect(calls).toBe(1);
    expect(poller.busy()).toBe(true);

    sched.fire(); // interval fires while the first tick is still in flight
    sched.fire();
    expect(calls).toBe(1); // suppressed

    resolveTick!();
    await Promise.resolve();
    await Promise.resolve();
    expect(poller.busy()).toBe(false);

    sched.fire();
    expect(calls).toBe(2);
    poller.stop();
  });

  it("swallows tick errors and keeps polling", async () => {
    let calls = 0;
    const tick = async () => {
      calls += 1;
      throw new Error("transient");
    };
    const sched = manualScheduler();
    const poller = createPoller(tick, 2000, sched.schedule, sched.cancel);
    poller.start();
    await Promise.resolve();
    await Promise.resolve();
    sched.fire();
    await Promise.resolve();
    expect(calls).toBe(2);
    poller.stop();
  });

  it("start is idempotent and stop cancels", () => {
    let scheduled = 0;
    const sched = {
      schedule(fn: () => void, _ms: number) {
        scheduled += 1;
        void fn;
        return scheduled;
      },
      cancel(_handle: unknown) {
        scheduled -= 1;
      },
    };
    const poller = createPoller(async () => {}, 2000, sched.schedule, sched.cancel);
    poller.start();
    poller.start();
    expect(scheduled).toBe(1);
    poller.stop();
    expect(scheduled).toBe(0);
  });
});
