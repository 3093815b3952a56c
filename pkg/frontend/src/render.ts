/**
 * Track display: a green cursor line and a gray zone on a fixed-aspect
 * 1000-unit logical track, scaled to the viewport.
 *
 * The mapping math is pure (testable); drawing is a thin canvas layer that
 * renders exactly the latest server display frame.
 */

import type { Display } from "./protocol.js";

export interface TrackGeometry {
  /** Logical track half-range in task units (the condition's full scale). */
  halfRange: number;
  /** Canvas width in pixels. */
  widthPx: number;
}

/** Map a task-unit position to a pixel x coordinate (0 = left edge). */
export function toPixels(x: number, geom: TrackGeometry): number {
  const { halfRange, widthPx } = geom;
  return ((x + halfRange) / (2 * halfRange)) * widthPx;
}

/** Pixel interval of a zone, clamped to the canvas. */
export function zoneToPixels(
  lo: number,
  hi: number,
  geom: TrackGeometry,
): [number, number] {
  const a = Math.max(0, toPixels(lo, geom));
  const b = Math.min(geom.widthPx, toPixels(hi, geom));
  return [a, b];
}

export class TrackRenderer {
  private readonly ctx: CanvasRenderingContext2D;
  private readonly canvas: HTMLCanvasElement;

  constructor(canvas: HTMLCanvasElement) {
    const ctx = canvas.getContext("2d");
    if (ctx === null) throw new Error("2d canvas context unavailable");
    this.canvas = canvas;
    this.ctx = ctx;
  }

  /** Draw the latest server frame; never interpolates or predicts. */
  draw(frame: Display, halfRange: number): void {
    const geom: TrackGeometry = {
      halfRange,
      widthPx: this.canvas.width,
    };
    const h = this.canvas.height;
    this.ctx.clearRect(0, 0, geom.widthPx, h);

    this.ctx.fillStyle = "#d0d0d0";
    const [zLo, zHi] = zoneToPixels(frame.zone_lo, frame.zone_hi, geom);
    this.ctx.fillRect(zLo, 0, zHi - zLo, h);

    this.ctx.strokeStyle = "#00a000";
    this.ctx.lineWidth = 3;
    const cx = toPixels(frame.cursor, geom);
    this.ctx.beginPath();
    this.ctx.moveTo(cx, 0);
    this.ctx.lineTo(cx, h);
    this.ctx.stroke();
  }
}
