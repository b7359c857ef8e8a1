/**
 * Typed client for the annotation-session HTTP API.
 *
 * The fetch implementation is injected so tests can script responses; the
 * browser entry point passes window.fetch. Error responses are converted to
 * ApiError carrying the HTTP status and the server's `detail` string
 * verbatim, which the UI shows to the annotator unchanged.
 */

export interface SessionSummary {
  session_id: string;
  condition: string;
  status: string;
  sample_rate_hz: string;
  total_len: number;
  region_count: number;
  submitted_count: number;
}

export interface RegionInfo {
  index: number;
  start_s: number;
  end_s: number;
  length_samples: number;
  preview: boolean;
  submitted: boolean;
  clip_url: string;
}

export interface RegionsPayload {
  session_id: string;
  condition: string;
  sample_rate_hz: string;
  regions: RegionInfo[];
}

export interface Reconstruction {
  session_id: string;
  sample_rate_hz: string;
  samples: number[];
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly detail: string,
  ) {
    super(detail);
    this.name = "ApiError";
  }
}

/** Parse the service's rational sample rate ("4" or "24/5") to Hz. */
export function parseRate(rate: string): number {
  const parts = rate.split("/");
  if (parts.length === 1) return Number(parts[0]);
  return Number(parts[0]) / Number(parts[1]);
}

export class SessionApi {
  constructor(
    private readonly fetchFn: FetchLike,
    private readonly baseUrl = "",
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const res = await this.fetchFn(this.baseUrl + path, init);
    if (!res.ok) {
      let detail = `${res.status} ${res.statusText}`;
      try {
        const body = (await res.json()) as { detail?: unknown };
        if (typeof body.detail === "string") detail = body.detail;
      } catch {
        // non-JSON error body: keep the status line
      }
      throw new ApiError(res.status, detail);
    }
    return (await res.json()) as T;
  }

  async listSessions(): Promise<SessionSummary[]> {
    const body = await this.request<{ sessions: SessionSummary[] }>("/sessions");
    return body.sessions;
  }

  regions(sessionId: string): Promise<RegionsPayload> {
    return this.request(`/sessions/${encodeURIComponent(sessionId)}/regions`);
  }

  async submitTrace(sessionId: string, k: number, samples: number[]): Promise<void> {
    await this.request(
      `/sessions/${encodeURIComponent(sessionId)}/regions/${k}/trace`,
      {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify({ samples }),
      },
    );
  }

  async complete(sessionId: string): Promise<void> {
    await this.request(`/sessions/${encodeURIComponent(sessionId)}/complete`, {
      method: "POST",
    });
  }

  reconstruction(sessionId: string): Promise<Reconstruction> {
    return this.request(`/sessions/${encodeURIComponent(sessionId)}/reconstruction`);
  }
}
