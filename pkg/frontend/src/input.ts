/**
 * Angle sources: every device yields a signed steering angle in degrees, or
 * null when released. The server maps angles to speeds; the client never
 * interprets them.
 */

export interface AngleSource {
  /** Current angle in degrees, or null when the control is released. */
  sample(): number | null;
  readonly device: string;
}

/** Gamepad / wheel axis mapped linearly to ±90 degrees. */
export class GamepadAxisSource implements AngleSource {
  readonly device = "gamepad";

  constructor(
    private readonly readAxis: () => number | null,
    private readonly deadzone = 0.05,
  ) {}

  sample(): number | null {
    const axis = this.readAxis();
    if (axis === null) return null;
    const clamped = Math.max(-1, Math.min(1, axis));
    if (Math.abs(clamped) < this.deadzone) return null;
    return clamped * 90;
  }
}

/**
 * Keyboard surrogate: arrow keys map to discrete angle levels straddling
 * the condition's speed-map thresholds. Left/right at the first level;
 * holding the modifier (shift) selects the outer level.
 */
export class KeyboardSource implements AngleSource {
  readonly device = "keyboard";
  private left = false;
  private right = false;
  private outer = false;

  constructor(
    /** Angle magnitudes for the inner and outer levels, in degrees. */
    private readonly levels: [number, number] = [15, 60],
  ) {}

  keyEvent(key: string, pressed: boolean): void {
    if (key === "ArrowLeft") this.left = pressed;
    else if (key === "ArrowRight") this.right = pressed;
    else if (key === "Shift") this.outer = pressed;
  }

  sample(): number | null {
    const magnitude = this.outer ? this.levels[1] : this.levels[0];
    if (this.left === this.right) return null; // neither, or both
    return this.left ? -magnitude : magnitude;
  }
}

/** Poll the browser Gamepad API for the first pad's steering axis. */
export function browserGamepadAxis(axisIndex = 0): () => number | null {
  return () => {
    const pads = navigator.getGamepads();
    for (const pad of pads) {
      if (pad !== null && pad.connected) {
        return pad.axes[axisIndex] ?? null;
      }
    }
    return null;
  };
}
