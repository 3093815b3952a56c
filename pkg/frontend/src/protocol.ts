/**
 * Wire protocol mirror of docs/protocol.md (protocol version 1).
 *
 * Every message is a single-line JSON object tagged with "type". Unknown
 * types and unknown fields are rejected, matching the server's decoder.
 */

export const PROTOCOL_VERSION = 1;

export class ProtocolError extends Error {}

// client -> server

export interface Hello {
  type: "hello";
  device: string;
  client_info: string;
}

export interface Input {
  type: "input";
  /** Steering angle in degrees; null = wheel released (zero speed). */
  angle: number | null;
  /** Last display tick seen when sampling; latency diagnostics only. */
  client_tick: number;
}

export interface StartTrial {
  type: "start_trial";
}

export interface Abort {
  type: "abort";
}

// server -> client

export interface Config {
  type: "config";
  session_id: string;
  trials: number;
  protocol_version: number;
  screen_units: number;
}

export interface Display {
  type: "display";
  tick: number;
  cursor: number;
  zone_lo: number;
  zone_hi: number;
}

export interface TrialStart {
  type: "trial_start";
  trial: number;
  D: number;
  W: number;
  variant: string;
  tick_seconds: number;
  hold_s: number;
  d_hidden: boolean;
}

export interface TrialEnd {
  type: "trial_end";
  trial: number;
  t_r: number | null;
  censored: boolean;
  status: string;
}

export interface ScheduleDone {
  type: "schedule_done";
}

export interface ErrorMessage {
  type: "error";
  reason: string;
}

export type ClientMessage = Hello | Input | StartTrial | Abort;
export type ServerMessage =
  | Config
  | Display
  | TrialStart
  | TrialEnd
  | ScheduleDone
  | ErrorMessage;
export type WireMessage = ClientMessage | ServerMessage;

/** Required fields per message type (besides "type" itself). */
const SCHEMA: Record<string, { required: string[]; optional: string[] }> = {
  hello: { required: [], optional: ["device", "client_info"] },
  input: { required: ["angle", "client_tick"], optional: [] },
  start_trial: { required: [], optional: [] },
  abort: { required: [], optional: [] },
  config: {
    required: ["session_id", "trials"],
    optional: ["protocol_version", "screen_units"],
  },
  display: { required: ["tick", "cursor", "zone_lo", "zone_hi"], optional: [] },
  trial_start: {
    required: ["trial", "D", "W", "variant", "tick_seconds", "hold_s"],
    optional: ["d_hidden"],
  },
  trial_end: { required: ["trial", "t_r", "censored", "status"], optional: [] },
  schedule_done: { required: [], optional: [] },
  error: { required: ["reason"], optional: [] },
};

const DEFAULTS: Record<string, Record<string, unknown>> = {
  hello: { device: "unknown", client_info: "" },
  config: { protocol_version: PROTOCOL_VERSION, screen_units: 1000 },
  trial_start: { d_hidden: true },
};

export function encode(msg: WireMessage): string {
  if (!(msg.type in SCHEMA)) {
    throw new ProtocolError(`not a wire message: ${String(msg.type)}`);
  }
  return JSON.stringify(msg);
}

export function decode(text: string): WireMessage {
  let body: unknown;
  try {
    body = JSON.parse(text);
  } catch (exc) {
    throw new ProtocolError(`invalid JSON: ${String(exc)}`);
  }
  if (typeof body !== "object" || body === null || Array.isArray(body)) {
    throw new ProtocolError("message must be an object with a 'type' tag");
  }
  const obj = body as Record<string, unknown>;
  const tag = obj["type"];
  if (typeof tag !== "string" || !(tag in SCHEMA)) {
    throw new ProtocolError(`unknown message type ${JSON.stringify(tag)}`);
  }
  const schema = SCHEMA[tag]!;
  const known = new Set(["type", ...schema.required, ...schema.optional]);
  for (const key of Object.keys(obj)) {
    if (!known.has(key)) {
      throw new ProtocolError(`unknown fields for ${tag}: ${key}`);
    }
  }
  for (const key of schema.required) {
    if (!(key in obj)) {
      throw new ProtocolError(`bad fields for ${tag}: missing ${key}`);
    }
  }
  const out: Record<string, unknown> = { ...(DEFAULTS[tag] ?? {}), ...obj };
  return out as unknown as WireMessage;
}
