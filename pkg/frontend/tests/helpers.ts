/**
 * Shared fixtures: a scripted clip player and an in-memory stand-in for the
 * annotation service's HTTP surface (same routes, status codes, and error
 * detail strings as the real server).
 */

import type { FetchLike } from "../src/api.js";
import type { ClipPlayer } from "../src/player.js";

export type TickScript = (playIndex: number, tick: (t: number) => void) => void | Promise<void>;

export class FakePlayer implements ClipPlayer {
  readonly plays: string[] = [];

  constructor(private readonly script: TickScript) {}

  async play(url: string, onTick: (t: number) => void): Promise<void> {
    const index = this.plays.length;
    this.plays.push(url);
    await this.script(index, onTick);
  }
}

/** Evenly spaced playback ticks covering a clip of `durationS` seconds. */
export function sweep(tick: (t: number) => void, durationS: number, dt = 0.05): void {
  for (let t = 0; t <= durationS + 1e-9; t += dt) tick(t);
}

export interface FakeRegionSpec {
  start: number;
  len: number;
  /** Length the server validates against when it disagrees with the payload. */
  serverLen?: number;
}

interface LoggedRequest {
  method: string;
  url: string;
  body?: unknown;
}

export class FakeService {
  readonly traces = new Map<number, number[]>();
  readonly requests: LoggedRequest[] = [];
  completed = false;
  /** Submissions to fail with a network error before succeeding. */
  failSubmits = 0;

  constructor(
    readonly sessionId: string,
    readonly rate: number,
    readonly totalLen: number,
    readonly condition: "full" | "prefab_no_preview" | "prefab_preview",
    readonly regions: FakeRegionSpec[],
  ) {}

  get fetch(): FetchLike {
    return (url, init) => this.handle(url, init);
  }

  private json(status: number, body: unknown): Response {
    return new Response(JSON.stringify(body), {
      status,
      headers: { "content-type": "application/json" },
    });
  }

  private summary() {
    return {
      session_id: this.sessionId,
      condition: this.condition,
      status: this.completed ? "complete" : this.traces.size ? "in_progress" : "pending",
      sample_rate_hz: String(this.rate),
      total_len: this.totalLen,
      region_count: this.regions.length,
      submitted_count: this.traces.size,
    };
  }

  private regionsPayload() {
    const preview = this.condition === "prefab_preview";
    return {
      session_id: this.sessionId,
      condition: this.condition,
      sample_rate_hz: String(this.rate),
      regions: this.regions.map((r, k) => ({
        index: k,
        start_s: r.start / this.rate,
        end_s: (r.start + r.len) / this.rate,
        length_samples: r.len,
        preview,
        submitted: this.traces.has(k),
        clip_url: `/sessions/${this.sessionId}/regions/${k}/clip`,
      })),
    };
  }

  private async handle(url: string, init?: RequestInit): Promise<Response> {
    const method = init?.method ?? "GET";
    const body = typeof init?.body === "string" ? JSON.parse(init.body) : undefined;
    this.requests.push({ method, url, body });

    if (method === "GET" && url === "/sessions") {
      return this.json(200, { sessions: [this.summary()] });
    }
    if (method === "GET" && url === `/sessions/${this.sessionId}/regions`) {
      return this.json(200, this.regionsPayload());
    }
    const submit = url.match(new RegExp(`^/sessions/${this.sessionId}/regions/(\\d+)/trace$`));
    if (method === "POST" && submit) {
      const k = Number(submit[1]);
      const region = this.regions[k];
      if (!region) return this.json(404, { detail: `session '${this.sessionId}' has no region ${k}` });
      if (this.failSubmits > 0) {
        this.failSubmits -= 1;
        throw new TypeError("fetch failed");
      }
      if (this.traces.has(k)) {
        return this.json(409, { detail: `region ${k} already has a submitted trace` });
      }
      const want = region.serverLen ?? region.len;
      const samples = (body as { samples: number[] }).samples;
      if (samples.length !== want) {
        return this.json(422, { detail: `region ${k} spans ${want} samples, got ${samples.length}` });
      }
      this.traces.set(k, samples);
      return this.json(201, { session_id: this.sessionId, region: k, length: want });
    }
    if (method === "POST" && url === `/sessions/${this.sessionId}/complete`) {
      const missing = this.regions.map((_, k) => k).filter((k) => !this.traces.has(k));
      if (missing.length) {
        return this.json(409, { detail: `regions not yet submitted: [${missing.join(", ")}]` });
      }
      this.completed = true;
      return this.json(200, { session_id: this.sessionId, status: "complete", total_len: this.totalLen });
    }
    if (method === "GET" && url === `/sessions/${this.sessionId}/reconstruction`) {
      if (!this.completed) {
        return this.json(404, { detail: `session '${this.sessionId}' is not completed` });
      }
      const samples = Array.from({ length: this.totalLen }, (_, i) => Math.sin(i / 7));
      return this.json(200, {
        session_id: this.sessionId,
        sample_rate_hz: String(this.rate),
        samples,
      });
    }
    return this.json(404, { detail: `unknown route ${method} ${url}` });
  }
}
