import { describe, expect, it } from "vitest";

import { DiagnosticsTracker } from "../src/diagnostics.js";

describe("DiagnosticsTracker", () => {
  it("reports mean frame interval and flags jittery ticks", () => {
    const diag = new DiagnosticsTracker(5);
    diag.onDisplay(0, 100);
    diag.onDisplay(1, 105);
    diag.onDisplay(2, 110);
    diag.onDisplay(3, 125); // 15 ms gap: deviates by 10 > 5
    const r = diag.report();
    expect(r.ticks).toBe(4);
    expect(r.meanIntervalMs).toBeCloseTo((5 + 5 + 15) / 3, 12);
    expect(r.flaggedTicks).toEqual([3]);
  });

  it("pairs each input with the display that answers it", () => {
    const diag = new DiagnosticsTracker(5);
    diag.onDisplay(0, 100);
    diag.onInput(0, 101);
    diag.onDisplay(1, 107); // answered input 0 after 6 ms
    diag.onInput(1, 108);
    diag.onDisplay(2, 110); // answered input 1 after 2 ms
    expect(diag.report().meanLatencyMs).toBeCloseTo(4, 12);
  });

  it("ignores displays with no matching input", () => {
    const diag = new DiagnosticsTracker(5);
    diag.onDisplay(0, 100);
    diag.onDisplay(1, 105);
    expect(diag.report().meanLatencyMs).toBe(0);
  });

  it("reset clears all state", () => {
    const diag = new DiagnosticsTracker(5);
    diag.onDisplay(0, 100);
    diag.onInput(0, 101);
    diag.reset();
    const r = diag.report();
    expect(r.ticks).toBe(0);
    expect(r.meanIntervalMs).toBe(0);
    expect(r.flaggedTicks).toEqual([]);
  });

  it("formats a stable overlay line", () => {
    const diag = new DiagnosticsTracker(5);
    expect(diag.overlayText()).toBe("latency 0.0 ms | interval 0.0 ms | jitter flags 0");
  });
});
