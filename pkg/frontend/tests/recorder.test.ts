import { describe, expect, it } from "vitest";

import { HoldGate, TraceRecorder } from "../src/recorder.js";
import { sweep } from "./helpers.js";

const STEP = 0.05;

function gateHolding(which?: "raise" | "lower"): HoldGate {
  const gate = new HoldGate();
  gate.setEnabled(true);
  if (which) gate.press(which);
  return gate;
}

describe("TraceRecorder", () => {
  it("records one zero per due sample when nothing is held", () => {
    // 5 s clip at 4 Hz covers a 20-sample region
    const rec = new TraceRecorder(20, 4, STEP, gateHolding());
    sweep((t) => rec.tick(t), 5.0);
    const samples = rec.finish();
    expect(samples).toHaveLength(20);
    expect(samples).toEqual(new Array(20).fill(0));
  });

  it("starts at zero even when raise is held before playback", () => {
    const rec = new TraceRecorder(20, 4, STEP, gateHolding("raise"));
    sweep((t) => rec.tick(t), 5.0);
    const samples = rec.finish();
    expect(samples[0]).toBe(0);
    for (let i = 1; i < samples.length; i++) {
      expect(samples[i]! - samples[i - 1]!).toBeCloseTo(STEP, 12);
    }
  });

  it("applies lower as a fixed negative step from the moment it is held", () => {
    const gate = gateHolding();
    const rec = new TraceRecorder(12, 4, STEP, gate);
    sweep((t) => {
      if (t >= 1.0) gate.press("lower");
      rec.tick(t);
    }, 3.0);
    const samples = rec.finish();
    // samples 0..3 fall before the press; the sample due at t = 1.0 already
    // sees the hold
    expect(samples.slice(0, 4)).toEqual([0, 0, 0, 0]);
    for (let i = 4; i < 12; i++) {
      expect(samples[i]! - samples[i - 1]!).toBeCloseTo(-STEP, 12);
    }
  });

  it("is insensitive to tick cadence for a fixed hold schedule", () => {
    const dense = new TraceRecorder(20, 4, STEP, gateHolding("raise"));
    sweep((t) => dense.tick(t), 5.0, 0.01);
    const sparse = new TraceRecorder(20, 4, STEP, gateHolding("raise"));
    for (const t of [0, 0.9, 0.91, 2.3, 2.3, 4.99]) sparse.tick(t);
    expect(sparse.finish()).toEqual(dense.finish());
  });

  it("never overruns the region length on ticks past the clip end", () => {
    const rec = new TraceRecorder(8, 4, STEP, gateHolding("raise"));
    sweep((t) => rec.tick(t), 9.0);
    expect(rec.count).toBe(8);
    expect(rec.finish()).toHaveLength(8);
  });

  it("flushes samples missed by a sparse final tick under the live hold", () => {
    const rec = new TraceRecorder(20, 4, STEP, gateHolding("raise"));
    sweep((t) => rec.tick(t), 4.3);
    expect(rec.count).toBeLessThan(20);
    const samples = rec.finish();
    expect(samples).toHaveLength(20);
    for (let i = 1; i < 20; i++) {
      expect(samples[i]! - samples[i - 1]!).toBeCloseTo(STEP, 12);
    }
  });

  it("handles an empty region", () => {
    const rec = new TraceRecorder(0, 4, STEP, gateHolding("raise"));
    rec.tick(1.0);
    expect(rec.finish()).toEqual([]);
  });

  it("rejects invalid lengths and rates", () => {
    expect(() => new TraceRecorder(-1, 4, STEP, gateHolding())).toThrow(/length/);
    expect(() => new TraceRecorder(2.5, 4, STEP, gateHolding())).toThrow(/length/);
    expect(() => new TraceRecorder(10, 0, STEP, gateHolding())).toThrow(/rate/);
  });
});

describe("HoldGate", () => {
  it("reports zero while disabled regardless of held keys", () => {
    const gate = new HoldGate();
    gate.press("raise");
    expect(gate.direction).toBe(0);
    gate.setEnabled(true);
    expect(gate.direction).toBe(1);
    gate.setEnabled(false);
    expect(gate.direction).toBe(0);
  });

  it("cancels opposing holds", () => {
    const gate = gateHolding("raise");
    gate.press("lower");
    expect(gate.direction).toBe(0);
    gate.release("raise");
    expect(gate.direction).toBe(-1);
    gate.release("lower");
    expect(gate.direction).toBe(0);
  });

  it("keeps tracking keys held across an enable toggle", () => {
    const gate = new HoldGate();
    gate.press("lower");
    gate.setEnabled(true);
    expect(gate.direction).toBe(-1);
  });
});
