/**
 * Clip playback behind a minimal interface so the annotation flow can be
 * driven by a scripted player in tests and by an HTMLMediaElement in the
 * browser.
 */

export interface ClipPlayer {
  /**
   * Play the clip at `url` from the start, reporting playback time through
   * `onTick` as it advances. Resolves when playback ends.
   */
  play(url: string, onTick: (mediaTime: number) => void): Promise<void>;
}

export class HtmlClipPlayer implements ClipPlayer {
  /**
   * `tickMs` sets the polling interval; `timeupdate` events alone fire too
   * coarsely (roughly 4 Hz and jittery) to be the only clock source.
   */
  constructor(
    private readonly media: HTMLMediaElement,
    private readonly tickMs = 50,
  ) {}

  play(url: string, onTick: (mediaTime: number) => void): Promise<void> {
    const media = this.media;
    return new Promise((resolve, reject) => {
      let timer: ReturnType<typeof setInterval> | undefined;
      const cleanup = () => {
        if (timer !== undefined) clearInterval(timer);
        media.removeEventListener("ended", onEnded);
        media.removeEventListener("error", onError);
        media.removeEventListener("timeupdate", onTime);
      };
      const onTime = () => onTick(media.currentTime);
      const onEnded = () => {
        cleanup();
        resolve();
      };
      const onError = () => {
        cleanup();
        reject(new Error(`clip failed to load: ${url}`));
      };
      media.addEventListener("ended", onEnded);
      media.addEventListener("error", onError);
      media.addEventListener("timeupdate", onTime);
      media.src = url;
      media.currentTime = 0;
      media
        .play()
        .then(() => {
          timer = setInterval(onTime, this.tickMs);
        })
        .catch((err) => {
          cleanup();
          reject(err);
        });
    });
  }
}
