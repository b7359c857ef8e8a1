/**
 * DOM shell for the annotation client: session list, region progress, the
 * capture flow, completion, and the reconstruction chart.
 *
 * All effects go through injected dependencies (HTTP client, clip player,
 * hold gate), so the whole app can be driven headlessly in tests. The server
 * is the source of truth for region state; the view re-fetches after every
 * submission rather than trusting local bookkeeping.
 */

import { ApiError, parseRate, type RegionsPayload, type SessionApi, type SessionSummary } from "./api.js";
import { RegionAnnotator, type Phase } from "./annotator.js";
import { chartSvg } from "./chart.js";
import type { ClipPlayer } from "./player.js";
import { HoldGate } from "./recorder.js";

export interface AppDeps {
  api: SessionApi;
  player: ClipPlayer;
  gate: HoldGate;
  /** Value change per sample while raise/lower is held. */
  step: number;
}

export interface AppHandle {
  openList(): Promise<void>;
  openSession(id: string): Promise<void>;
  annotateNext(): Promise<void>;
  retry(): Promise<void>;
  completeSession(): Promise<void>;
  /** Resolves once the work started by the last interaction has finished. */
  settled(): Promise<void>;
}

const PHASE_TEXT: Record<Phase["kind"], string> = {
  idle: "idle",
  preview: "preview playback: watch only, input is disabled",
  recording: "recording: hold raise or lower",
  submitting: "submitting trace",
  submitted: "trace submitted",
  error: "submission failed",
};

export function initApp(root: HTMLElement, deps: AppDeps): AppHandle {
  const doc = root.ownerDocument;
  let sessions: SessionSummary[] = [];
  let current: RegionsPayload | null = null;
  let phase: Phase = { kind: "idle" };
  let errorRegion: { k: number; message: string; canRetry: boolean } | null = null;
  let reconstruction: number[] | null = null;
  let busy = false;
  let pending: Promise<void> = Promise.resolve();

  const annotator = new RegionAnnotator(deps.api, deps.player, deps.gate, deps.step, {
    onPhase(p) {
      phase = p;
      if (p.kind === "error") errorRegion = { k: p.region, message: p.message, canRetry: p.canRetry };
      else if (p.kind === "submitted") errorRegion = null;
      renderStatus();
    },
    onSample(count, value) {
      const live = root.querySelector<HTMLElement>("#live");
      const total = currentRegionLength();
      if (live) live.textContent = `${count} / ${total} samples, value ${value.toFixed(2)}`;
    },
  });

  root.innerHTML = `<div class="app"><h1>affect annotation</h1><div id="view"></div></div>`;
  const view = root.querySelector<HTMLElement>("#view")!;

  doc.addEventListener("keydown", (ev) => {
    const key = (ev as KeyboardEvent).key;
    if (key === "ArrowUp") deps.gate.press("raise");
    else if (key === "ArrowDown") deps.gate.press("lower");
    else return;
    if (deps.gate.enabled) ev.preventDefault();
  });
  doc.addEventListener("keyup", (ev) => {
    const key = (ev as KeyboardEvent).key;
    if (key === "ArrowUp") deps.gate.release("raise");
    else if (key === "ArrowDown") deps.gate.release("lower");
  });

  function currentRegionLength(): number {
    if (!current) return 0;
    if (phase.kind === "idle") return 0;
    const region = current.regions[(phase as { region: number }).region];
    return region ? region.length_samples : 0;
  }

  function nextRegion() {
    return current?.regions.find((r) => !r.submitted && !annotator.buffered(r.index));
  }

  function track(work: () => Promise<void>): Promise<void> {
    const job = pending.then(work, work);
    pending = job.catch(() => {});
    return job;
  }

  async function loadList(): Promise<void> {
    sessions = await deps.api.listSessions();
    current = null;
    reconstruction = null;
    renderList();
  }

  async function loadSession(id: string): Promise<void> {
    current = await deps.api.regions(id);
    reconstruction = null;
    const summary = sessions.find((s) => s.session_id === id);
    if (summary?.status === "complete" || current.regions.every((r) => r.submitted)) {
      try {
        reconstruction = (await deps.api.reconstruction(id)).samples;
      } catch (err) {
        if (!(err instanceof ApiError && err.status === 404)) throw err;
      }
    }
    renderSession();
  }

  async function annotateNext(): Promise<void> {
    if (!current || busy) return;
    const region = nextRegion();
    if (!region) return;
    busy = true;
    renderSession();
    try {
      await annotator.annotate(current.session_id, region, parseRate(current.sample_rate_hz));
    } finally {
      busy = false;
    }
    await refreshRegions();
  }

  async function retry(): Promise<void> {
    if (!current || !errorRegion || busy) return;
    busy = true;
    try {
      await annotator.submit(current.session_id, errorRegion.k);
    } finally {
      busy = false;
    }
    await refreshRegions();
  }

  async function completeSession(): Promise<void> {
    if (!current) return;
    await deps.api.complete(current.session_id);
    reconstruction = (await deps.api.reconstruction(current.session_id)).samples;
    renderSession();
  }

  async function refreshRegions(): Promise<void> {
    if (!current) return;
    current = await deps.api.regions(current.session_id);
    renderSession();
  }

  function renderList(): void {
    const items = sessions
      .map(
        (s) => `
      <li>
        <button class="open" data-id="${s.session_id}">${s.session_id}</button>
        <span class="meta">${s.condition}, ${s.status}, ${s.submitted_count}/${s.region_count} regions</span>
      </li>`,
      )
      .join("");
    view.innerHTML = `<ul class="sessions">${items}</ul>`;
    for (const btn of view.querySelectorAll<HTMLButtonElement>("button.open")) {
      btn.addEventListener("click", () => {
        void track(() => loadSession(btn.dataset.id!));
      });
    }
  }

  function renderSession(): void {
    if (!current) return;
    const payload = current;
    const done = payload.regions.filter((r) => r.submitted).length;
    const total = payload.regions.length;
    const rows = payload.regions
      .map((r) => {
        const state = r.submitted ? "submitted" : annotator.buffered(r.index) ? "captured, not accepted" : "pending";
        const preview = r.preview ? ", preview first" : "";
        return `<li>region ${r.index}: ${r.start_s.toFixed(1)}-${r.end_s.toFixed(1)} s, ${r.length_samples} samples${preview}; <em class="state">${state}</em></li>`;
      })
      .join("");
    view.innerHTML = `
      <button id="back">all sessions</button>
      <h2>${payload.session_id} <span class="badge">${payload.condition}</span></h2>
      <p id="progress">${done} / ${total} regions submitted</p>
      <ol class="regions">${rows}</ol>
      <div class="controls">
        <button id="annotate" ${busy || !nextRegion() ? "disabled" : ""}>annotate next region</button>
        <button id="raise" class="hold">raise</button>
        <button id="lower" class="hold">lower</button>
        <button id="complete" ${done === total ? "" : "disabled"}>complete session</button>
      </div>
      <p id="phase">${PHASE_TEXT[phase.kind]}</p>
      <p id="live"></p>
      <div id="banner" class="error" ${errorRegion ? "" : "hidden"}>
        <span id="error-text">${errorRegion ? escapeHtml(errorRegion.message) : ""}</span>
        ${errorRegion?.canRetry ? `<button id="retry">retry</button>` : ""}
      </div>
      <div id="chart">${reconstruction ? chartSvg(reconstruction, parseRate(payload.sample_rate_hz)) : ""}</div>
    `;
    view.querySelector("#back")?.addEventListener("click", () => {
      void track(loadList);
    });
    view.querySelector("#annotate")?.addEventListener("click", () => {
      void track(annotateNext);
    });
    view.querySelector("#complete")?.addEventListener("click", () => {
      void track(completeSession);
    });
    view.querySelector("#retry")?.addEventListener("click", () => {
      void track(retry);
    });
    wireHoldButton("#raise", "raise");
    wireHoldButton("#lower", "lower");
  }

  function wireHoldButton(selector: string, which: "raise" | "lower"): void {
    const btn = view.querySelector<HTMLButtonElement>(selector);
    if (!btn) return;
    btn.addEventListener("pointerdown", () => deps.gate.press(which));
    btn.addEventListener("pointerup", () => deps.gate.release(which));
    btn.addEventListener("pointerleave", () => deps.gate.release(which));
  }

  function renderStatus(): void {
    const label = root.querySelector<HTMLElement>("#phase");
    if (label) label.textContent = PHASE_TEXT[phase.kind];
    const banner = root.querySelector<HTMLElement>("#banner");
    const text = root.querySelector<HTMLElement>("#error-text");
    if (banner && text) {
      if (errorRegion) {
        banner.removeAttribute("hidden");
        text.textContent = errorRegion.message;
        let retryBtn = banner.querySelector<HTMLButtonElement>("#retry");
        if (errorRegion.canRetry && !retryBtn) {
          retryBtn = doc.createElement("button");
          retryBtn.id = "retry";
          retryBtn.textContent = "retry";
          retryBtn.addEventListener("click", () => {
            void track(retry);
          });
          banner.appendChild(retryBtn);
        }
        if (!errorRegion.canRetry && retryBtn) retryBtn.remove();
      } else {
        banner.setAttribute("hidden", "");
        text.textContent = "";
      }
    }
  }

  function escapeHtml(s: string): string {
    return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;").replace(/"/g, "&quot;");
  }

  return {
    openList: () => track(loadList),
    openSession: (id: string) => track(() => loadSession(id)),
    annotateNext: () => track(annotateNext),
    retry: () => track(retry),
    completeSession: () => track(completeSession),
    settled: () => pending,
  };
}
