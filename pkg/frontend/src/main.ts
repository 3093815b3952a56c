/**
 * Browser entry point: connect to the experiment service over WebSocket,
 * draw each display frame on a canvas, and sample the steering input once
 * per frame. A diagnostics overlay reports frame jitter and round-trip
 * latency.
 *
 * Everything authoritative happens on the server; this file is wiring.
 */

import { DiagnosticsTracker } from "./diagnostics.js";
import {
  browserGamepadAxis,
  GamepadAxisSource,
  KeyboardSource,
  type AngleSource,
} from "./input.js";
import { TrackRenderer } from "./render.js";
import { TrialFlow, type Transport } from "./trial.js";

function webSocketTransport(url: string): Promise<Transport> {
  return new Promise((resolve, reject) => {
    const ws = new WebSocket(url);
    const handlers: Array<(text: string) => void> = [];
    ws.onopen = () =>
      resolve({
        send: (text) => ws.send(text),
        onMessage: (h) => handlers.push(h),
      });
    ws.onerror = () => reject(new Error(`websocket failed: ${url}`));
    ws.onmessage = (ev) => {
      for (const h of handlers) h(String(ev.data));
    };
  });
}

function pickSource(): AngleSource {
  const pads = typeof navigator !== "undefined" ? navigator.getGamepads?.() : null;
  if (pads && Array.from(pads).some((p) => p !== null)) {
    return new GamepadAxisSource(browserGamepadAxis(0));
  }
  const keyboard = new KeyboardSource();
  window.addEventListener("keydown", (e) => keyboard.keyEvent(e.key, true));
  window.addEventListener("keyup", (e) => keyboard.keyEvent(e.key, false));
  return keyboard;
}

async function run(): Promise<void> {
  const params = new URLSearchParams(window.location.search);
  const sessionId = params.get("session");
  if (sessionId === null) {
    document.body.textContent =
      "missing ?session=<id> — create one with POST /sessions first";
    return;
  }
  const host = params.get("host") ?? window.location.host;
  const url = `ws://${host}/sessions/${sessionId}/ws`;

  const canvas = document.getElementById("track") as HTMLCanvasElement;
  const status = document.getElementById("status") as HTMLElement;
  const overlay = document.getElementById("diagnostics") as HTMLElement;
  const renderer = new TrackRenderer(canvas);
  const source = pickSource();

  const transport = await webSocketTransport(url);
  const diag = new DiagnosticsTracker(5);

  const flow = new TrialFlow(transport, source, {
    onFrame: (frame, trial) => renderer.draw(frame, 2 * trial.D),
    onTrialStart: (trial) => {
      status.textContent = `trial ${trial.trial}: D=${trial.D} W=${trial.W} (${trial.variant})`;
      diag.reset();
    },
    onTrialEnd: (end) => {
      const label =
        end.t_r === null
          ? `censored (${end.status})`
          : `t_r = ${end.t_r.toFixed(2)} s`;
      status.textContent = `trial ${end.trial} finished: ${label} — press space for next`;
    },
    onScheduleDone: () => {
      status.textContent = "schedule complete — thank you";
    },
    onError: (reason) => {
      status.textContent = `server error: ${reason}`;
    },
    onDisplayTiming: (tick) => diag.onDisplay(tick, performance.now()),
    onInputTiming: (tick) => diag.onInput(tick, performance.now()),
  });

  window.addEventListener("keydown", (e) => {
    if (e.key === " " && flow.phase === "idle") flow.startNextTrial();
    if (e.key === "Escape") flow.abortTrial();
  });

  const redraw = (): void => {
    overlay.textContent = diag.overlayText();
    requestAnimationFrame(redraw);
  };
  requestAnimationFrame(redraw);

  flow.hello(navigator.userAgent);
  status.textContent = "connected — press space to start the first trial";
}

run().catch((err) => {
  document.body.textContent = String(err);
});
