/**
 * Latency and jitter diagnostics. Purely observational: nothing here feeds
 * back into the trial loop, so it cannot contaminate measured reach times.
 */

export interface JitterReport {
  ticks: number;
  /** Mean interval between display frames, ms. */
  meanIntervalMs: number;
  /** Mean |input sent -> next display| round trip, ms. */
  meanLatencyMs: number;
  /** Ticks whose inter-frame interval deviated by more than one interval. */
  flaggedTicks: number[];
}

export class DiagnosticsTracker {
  private frameTimes: { tick: number; at: number }[] = [];
  private inputTimes = new Map<number, number>();
  private latencies: number[] = [];

  constructor(private readonly tickMs: number) {}

  /** Record the arrival of a display frame (client clock, ms). */
  onDisplay(tick: number, atMs: number): void {
    this.frameTimes.push({ tick, at: atMs });
    // latency: time from the input that carried client_tick = tick - 1
    const sent = this.inputTimes.get(tick - 1);
    if (sent !== undefined) {
      this.latencies.push(atMs - sent);
      this.inputTimes.delete(tick - 1);
    }
  }

  /** Record an input send, keyed by the client_tick it carried. */
  onInput(clientTick: number, atMs: number): void {
    this.inputTimes.set(clientTick, atMs);
  }

  report(): JitterReport {
    const intervals: number[] = [];
    const flagged: number[] = [];
    for (let i = 1; i < this.frameTimes.length; i++) {
      const prev = this.frameTimes[i - 1]!;
      const cur = this.frameTimes[i]!;
      const dt = cur.at - prev.at;
      intervals.push(dt);
      if (Math.abs(dt - this.tickMs) > this.tickMs) {
        flagged.push(cur.tick);
      }
    }
    const mean = (xs: number[]) =>
      xs.length === 0 ? 0 : xs.reduce((a, b) => a + b, 0) / xs.length;
    return {
      ticks: this.frameTimes.length,
      meanIntervalMs: mean(intervals),
      meanLatencyMs: mean(this.latencies),
      flaggedTicks: flagged,
    };
  }

  /** One-line overlay text for the diagnostics corner. */
  overlayText(): string {
    const r = this.report();
    return (
      `latency ${r.meanLatencyMs.toFixed(1)} ms | ` +
      `interval ${r.meanIntervalMs.toFixed(1)} ms | ` +
      `jitter flags ${r.flaggedTicks.length}`
    );
  }

  reset(): void {
    this.frameTimes = [];
    this.inputTimes.clear();
    this.latencies = [];
  }
}
