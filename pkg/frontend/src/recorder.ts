/**
 * Relative trace capture clocked by media playback time.
 *
 * The recorder emits one sample per 1/rate seconds of *playback* time, not
 * wall clock, so pauses and stutter do not distort the trace. Sample n is due
 * once playback reaches n/rate seconds; each tick appends every sample that
 * has become due, applying the held direction (raise/lower/none) as a fixed
 * step per sample. The first sample is always 0: annotators report change,
 * not level, so every region trace starts at its local baseline.
 */

export interface HoldSource {
  /** +1 while "raise" is held, -1 while "lower" is held, else 0. */
  readonly direction: -1 | 0 | 1;
}

export class TraceRecorder {
  private samples: number[] = [];
  private value = 0;
  private started = false;

  constructor(
    readonly length: number,
    readonly rateHz: number,
    readonly step: number,
    private readonly input: HoldSource,
  ) {
    if (length < 0 || !Number.isInteger(length)) {
      throw new Error(`region length must be a non-negative integer, got ${length}`);
    }
    if (rateHz <= 0) throw new Error(`sample rate must be positive, got ${rateHz}`);
  }

  /** Begin capture at playback time 0. Idempotent. */
  start(): void {
    if (this.started) return;
    this.started = true;
    this.value = 0;
    if (this.length > 0) this.samples.push(0);
  }

  /** Advance capture to the given playback time (seconds). */
  tick(mediaTime: number): void {
    this.start();
    const due = Math.min(this.length, Math.floor(mediaTime * this.rateHz) + 1);
    this.fillTo(due);
  }

  /** Playback ended: flush any samples the last tick missed. */
  finish(): number[] {
    this.start();
    this.fillTo(this.length);
    return [...this.samples];
  }

  get count(): number {
    return this.samples.length;
  }

  get current(): number {
    return this.value;
  }

  private fillTo(due: number): void {
    while (this.samples.length < due) {
      this.value += this.step * this.input.direction;
      this.samples.push(this.value);
    }
  }
}

/**
 * Hold state shared by keyboard and on-screen controls, with an enable gate.
 *
 * While the gate is disabled (between regions, and during the preview pass)
 * the reported direction is 0 no matter what is physically held; the held
 * keys are still tracked, so an annotator already holding "raise" when
 * recording starts takes effect from the first recorded sample.
 */
export class HoldGate implements HoldSource {
  private raise = false;
  private lower = false;
  private on = false;

  get enabled(): boolean {
    return this.on;
  }

  setEnabled(on: boolean): void {
    this.on = on;
  }

  press(which: "raise" | "lower"): void {
    if (which === "raise") this.raise = true;
    else this.lower = true;
  }

  release(which: "raise" | "lower"): void {
    if (which === "raise") this.raise = false;
    else this.lower = false;
  }

  get direction(): -1 | 0 | 1 {
    if (!this.on || this.raise === this.lower) return 0;
    return this.raise ? 1 : -1;
  }
}
