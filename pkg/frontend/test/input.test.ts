import { describe, expect, it } from "vitest";

import { GamepadAxisSource, KeyboardSource } from "../src/input.js";

describe("KeyboardSource", () => {
  it("returns null with nothing pressed", () => {
    expect(new KeyboardSource().sample()).toBeNull();
  });

  it("maps arrows to signed inner-level angles", () => {
    const src = new KeyboardSource([15, 60]);
    src.keyEvent("ArrowRight", true);
    expect(src.sample()).toBe(15);
    src.keyEvent("ArrowRight", false);
    src.keyEvent("ArrowLeft", true);
    expect(src.sample()).toBe(-15);
  });

  it("selects the outer level while shift is held", () => {
    const src = new KeyboardSource([15, 60]);
    src.keyEvent("ArrowRight", true);
    src.keyEvent("Shift", true);
    expect(src.sample()).toBe(60);
    src.keyEvent("Shift", false);
    expect(src.sample()).toBe(15);
  });

  it("returns null when both arrows are held", () => {
    const src = new KeyboardSource();
    src.keyEvent("ArrowLeft", true);
    src.keyEvent("ArrowRight", true);
    expect(src.sample()).toBeNull();
  });

  it("releasing all keys returns to null", () => {
    const src = new KeyboardSource();
    src.keyEvent("ArrowRight", true);
    src.keyEvent("ArrowRight", false);
    expect(src.sample()).toBeNull();
  });
});

describe("GamepadAxisSource", () => {
  it("maps the axis linearly to ±90 degrees", () => {
    const src = new GamepadAxisSource(() => 0.5);
    expect(src.sample()).toBe(45);
    expect(new GamepadAxisSource(() => -1).sample()).toBe(-90);
  });

  it("clamps out-of-range axis values", () => {
    expect(new GamepadAxisSource(() => 2).sample()).toBe(90);
    expect(new GamepadAxisSource(() => -3).sample()).toBe(-90);
  });

  it("treats the deadzone and a missing pad as released", () => {
    expect(new GamepadAxisSource(() => 0.01).sample()).toBeNull();
    expect(new GamepadAxisSource(() => null).sample()).toBeNull();
  });
});
