/** Browser entry point: wire real fetch, media element, and keyboard. */

import { SessionApi } from "./api.js";
import { initApp } from "./app.js";
import { HtmlClipPlayer } from "./player.js";
import { HoldGate } from "./recorder.js";

const root = document.getElementById("app");
const media = document.getElementById("clip");
if (!(root instanceof HTMLElement) || !(media instanceof HTMLMediaElement)) {
  throw new Error("annotator shell markup missing #app or #clip");
}

const params = new URLSearchParams(window.location.search);
const step = Number(params.get("step") ?? "0.05");
const base = params.get("api") ?? "";

const handle = initApp(root, {
  api: new SessionApi((url, init) => window.fetch(url, init), base),
  player: new HtmlClipPlayer(media),
  gate: new HoldGate(),
  step: Number.isFinite(step) && step > 0 ? step : 0.05,
});

void handle.openList();
