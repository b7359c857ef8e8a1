/**
 * Contract tests for the annotation client, driven through the full DOM app
 * with scripted playback and scripted keyboard input:
 *
 *  1. captured traces start at zero and have exactly region-length samples;
 *  2. preview sessions play each clip twice, input disabled on the first;
 *  3. a 422 length rejection reaches the annotator verbatim.
 */

import { beforeEach, describe, expect, it } from "vitest";

import { SessionApi } from "../src/api.js";
import { initApp, type AppHandle } from "../src/app.js";
import { HoldGate } from "../src/recorder.js";
import { FakePlayer, FakeService, sweep, type TickScript } from "./helpers.js";

const STEP = 0.05;
const RATE = 4;

function mount(service: FakeService, script: TickScript) {
  document.body.innerHTML = `<div id="app"></div>`;
  const root = document.getElementById("app") as HTMLElement;
  const gate = new HoldGate();
  const player = new FakePlayer(script);
  const handle: AppHandle = initApp(root, {
    api: new SessionApi(service.fetch),
    player,
    gate,
    step: STEP,
  });
  return { root, gate, player, handle };
}

function key(type: "keydown" | "keyup", k: string): void {
  document.dispatchEvent(new KeyboardEvent(type, { key: k }));
}

async function annotate(root: HTMLElement, handle: AppHandle): Promise<void> {
  root.querySelector<HTMLElement>("#annotate")!.click();
  await handle.settled();
}

describe("annotation client contract", () => {
  beforeEach(() => {
    document.body.innerHTML = "";
  });

  it("scripted hold input yields a zero-start trace of exactly region length", async () => {
    // region 0: 5 s at 4 Hz = 20 samples, annotated with "raise" held
    // throughout; region 1: 3 s = 12 samples, no input at all
    const service = new FakeService("s01", RATE, 480, "full", [
      { start: 8, len: 20 },
      { start: 120, len: 12 },
    ]);
    const { root, handle } = mount(service, (i, tick) => {
      if (i === 0) {
        key("keydown", "ArrowUp");
        sweep(tick, 5.0);
        key("keyup", "ArrowUp");
      } else {
        sweep(tick, 3.0);
      }
    });
    await handle.openSession("s01");
    await annotate(root, handle);
    await annotate(root, handle);

    const held = service.traces.get(0)!;
    expect(held).toHaveLength(20);
    expect(held[0]).toBe(0);
    for (let i = 1; i < held.length; i++) {
      expect(held[i]! - held[i - 1]!).toBeCloseTo(STEP, 12);
      expect(held[i]!).toBeGreaterThan(held[i - 1]!);
    }

    const idle = service.traces.get(1)!;
    expect(idle).toHaveLength(12);
    expect(idle).toEqual(new Array(12).fill(0));
  });

  it("preview sessions play each clip twice and ignore input during the first pass", async () => {
    const service = new FakeService("s01", RATE, 480, "prefab_preview", [{ start: 8, len: 20 }]);
    const seen: Array<{ play: number; enabled: boolean; direction: number; phase: string }> = [];
    const { root, gate, player, handle } = mount(service, (i, tick) => {
      key("keydown", "ArrowUp");
      seen.push({
        play: i,
        enabled: gate.enabled,
        direction: gate.direction,
        phase: root.querySelector("#phase")!.textContent ?? "",
      });
      sweep(tick, 5.0);
      if (i === 1) key("keyup", "ArrowUp");
    });
    await handle.openSession("s01");
    await annotate(root, handle);

    expect(player.plays).toHaveLength(2);
    expect(player.plays[0]).toBe(player.plays[1]);
    expect(seen[0]).toMatchObject({ play: 0, enabled: false, direction: 0 });
    expect(seen[0]!.phase).toContain("input is disabled");
    expect(seen[1]).toMatchObject({ play: 1, enabled: true, direction: 1 });

    // the key was held during both passes: only the second one recorded
    const sent = service.traces.get(0)!;
    expect(sent).toHaveLength(20);
    expect(sent[0]).toBe(0);
    for (let i = 1; i < sent.length; i++) {
      expect(sent[i]! - sent[i - 1]!).toBeCloseTo(STEP, 12);
    }
  });

  it("surfaces a 422 length mismatch to the annotator verbatim", async () => {
    // server manifest disagrees with the advertised payload length, so the
    // submission is rejected with the service's own wording
    const service = new FakeService("s01", RATE, 480, "full", [{ start: 8, len: 20, serverLen: 24 }]);
    const { root, handle } = mount(service, (_i, tick) => sweep(tick, 5.0));
    await handle.openSession("s01");
    await annotate(root, handle);

    const banner = root.querySelector<HTMLElement>("#banner")!;
    expect(banner.hasAttribute("hidden")).toBe(false);
    expect(root.querySelector("#error-text")!.textContent).toBe("region 0 spans 24 samples, got 20");
    expect(root.querySelector("#phase")!.textContent).toBe("submission failed");
  });
});
