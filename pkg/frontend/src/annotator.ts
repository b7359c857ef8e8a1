/**
 * Per-region annotation flow: optional non-interactive preview playback,
 * then a recorded playback, then submission.
 *
 * Regions whose payload carries `preview: true` are played twice: the first
 * pass has input disabled (the annotator just watches), only the second pass
 * records. Captured traces are buffered locally until the server accepts
 * them, so a failed submission can be retried without replaying the clip.
 * One submission is in flight at a time.
 */

import { ApiError, type RegionInfo, type SessionApi } from "./api.js";
import type { ClipPlayer } from "./player.js";
import { HoldGate, TraceRecorder } from "./recorder.js";

export type Phase =
  | { kind: "idle" }
  | { kind: "preview"; region: number }
  | { kind: "recording"; region: number }
  | { kind: "submitting"; region: number }
  | { kind: "submitted"; region: number }
  | { kind: "error"; region: number; message: string; canRetry: boolean };

export interface AnnotatorEvents {
  onPhase?(phase: Phase): void;
  /** Live capture progress: samples recorded so far and the current value. */
  onSample?(count: number, value: number): void;
}

export type SubmitOutcome = "submitted" | "failed";

export class RegionAnnotator {
  private buffers = new Map<number, number[]>();
  private submitting = false;

  constructor(
    private readonly api: SessionApi,
    private readonly player: ClipPlayer,
    readonly gate: HoldGate,
    private readonly step: number,
    private readonly events: AnnotatorEvents = {},
  ) {}

  /** Trace captured for a region but not yet accepted by the server. */
  buffered(k: number): number[] | undefined {
    const samples = this.buffers.get(k);
    return samples && [...samples];
  }

  /** Play (previewing first if required), record, and submit one region. */
  async annotate(sessionId: string, region: RegionInfo, rateHz: number): Promise<SubmitOutcome> {
    if (region.preview) {
      this.gate.setEnabled(false);
      this.setPhase({ kind: "preview", region: region.index });
      await this.player.play(region.clip_url, () => {});
    }

    const recorder = new TraceRecorder(region.length_samples, rateHz, this.step, this.gate);
    this.gate.setEnabled(true);
    this.setPhase({ kind: "recording", region: region.index });
    recorder.start();
    this.events.onSample?.(recorder.count, recorder.current);
    let samples: number[];
    try {
      await this.player.play(region.clip_url, (t) => {
        recorder.tick(t);
        this.events.onSample?.(recorder.count, recorder.current);
      });
      // flush before dropping the gate so samples the last tick missed still
      // see the held direction
      samples = recorder.finish();
    } finally {
      this.gate.setEnabled(false);
    }
    this.buffers.set(region.index, samples);
    return this.submit(sessionId, region.index);
  }

  /** Submit the buffered trace for region `k` (first attempt or retry). */
  async submit(sessionId: string, k: number): Promise<SubmitOutcome> {
    const samples = this.buffers.get(k);
    if (!samples) throw new Error(`no buffered trace for region ${k}`);
    if (this.submitting) throw new Error("a submission is already in flight");
    this.submitting = true;
    this.setPhase({ kind: "submitting", region: k });
    try {
      await this.api.submitTrace(sessionId, k, samples);
    } catch (err) {
      // The buffer is kept: a retry resubmits the same trace. Client errors
      // (the server rejected this exact payload) are not retryable; show the
      // server's reason verbatim either way.
      const message = err instanceof ApiError ? err.detail : String(err);
      const canRetry = !(err instanceof ApiError && err.status >= 400 && err.status < 500);
      this.setPhase({ kind: "error", region: k, message, canRetry });
      return "failed";
    } finally {
      this.submitting = false;
    }
    this.buffers.delete(k);
    this.setPhase({ kind: "submitted", region: k });
    return "submitted";
  }

  private setPhase(phase: Phase): void {
    this.events.onPhase?.(phase);
  }
}
