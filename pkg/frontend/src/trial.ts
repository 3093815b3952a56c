/**
 * Trial flow: start prompt -> live trial -> end feedback -> next.
 *
 * The client never computes dynamics. On every display frame it samples the
 * active angle source and sends one input; the render hook is purely an
 * output. Removing the renderer cannot change any persisted reach time —
 * the server decides everything from the input stream alone.
 */

import type { AngleSource } from "./input.js";
import {
  decode,
  encode,
  type Config,
  type Display,
  type ServerMessage,
  type TrialEnd,
  type TrialStart,
  type WireMessage,
} from "./protocol.js";

/** Minimal transport: WebSocket in the browser, a fake in tests. */
export interface Transport {
  send(text: string): void;
  onMessage(handler: (text: string) => void): void;
}

export type FlowPhase = "connecting" | "idle" | "running" | "done";

export interface FlowEvents {
  /** Latest display frame; rendering only. */
  onFrame?: (frame: Display, trial: TrialStart) => void;
  onTrialStart?: (trial: TrialStart) => void;
  onTrialEnd?: (end: TrialEnd) => void;
  onScheduleDone?: () => void;
  onError?: (reason: string) => void;
  /** Observational timing hooks for the diagnostics overlay. */
  onDisplayTiming?: (tick: number) => void;
  onInputTiming?: (clientTick: number) => void;
}

export class TrialFlow {
  phase: FlowPhase = "connecting";
  config: Config | null = null;
  currentTrial: TrialStart | null = null;
  completed: TrialEnd[] = [];

  constructor(
    private readonly transport: Transport,
    private readonly source: AngleSource,
    private readonly events: FlowEvents = {},
  ) {
    transport.onMessage((text) => this.handle(decode(text) as ServerMessage));
  }

  /** Announce the input device and begin the schedule. */
  hello(clientInfo = ""): void {
    this.send({
      type: "hello",
      device: this.source.device,
      client_info: clientInfo,
    });
  }

  startNextTrial(): void {
    if (this.phase === "running") {
      throw new Error("a trial is already running");
    }
    this.send({ type: "start_trial" });
  }

  abortTrial(): void {
    if (this.phase !== "running") return;
    this.send({ type: "abort" });
  }

  /** Schedule progress in [0, 1]. */
  progress(): number {
    if (this.config === null || this.config.trials === 0) return 0;
    return this.completed.length / this.config.trials;
  }

  private send(msg: WireMessage): void {
    this.transport.send(encode(msg));
  }

  private handle(msg: ServerMessage): void {
    switch (msg.type) {
      case "config":
        this.config = msg;
        this.phase = "idle";
        break;
      case "trial_start":
        this.currentTrial = msg;
        this.phase = "running";
        this.events.onTrialStart?.(msg);
        break;
      case "display":
        this.onDisplay(msg);
        break;
      case "trial_end":
        this.phase = "idle";
        this.currentTrial = null;
        this.completed.push(msg);
        this.events.onTrialEnd?.(msg);
        break;
      case "schedule_done":
        this.phase = "done";
        this.events.onScheduleDone?.();
        break;
      case "error":
        this.events.onError?.(msg.reason);
        break;
    }
  }

  private onDisplay(frame: Display): void {
    if (this.currentTrial === null) return;
    this.events.onDisplayTiming?.(frame.tick);
    // render path: output only, after the input decision is made below
    const angle = this.source.sample();
    this.send({ type: "input", angle, client_tick: frame.tick });
    this.events.onInputTiming?.(frame.tick);
    this.events.onFrame?.(frame, this.currentTrial);
  }
}
