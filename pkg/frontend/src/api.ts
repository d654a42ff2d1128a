// Thin fetch client for the adaptation engine. The console mutates engine
// state only through requestExplanation and submitFeedback; everything else
// is read-only.

import type {
  BeliefView,
  EngineEvent,
  ExplanationRecord,
  PolicySnapshot,
  Profile,
  Verdict,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public status: number,
    public detail: string,
  ) {
    super(`engine returned ${status}: ${detail}`);
  }
}

async function asJson<T>(resp: Response): Promise<T> {
  if (!resp.ok) {
    let detail = resp.statusText;
    try {
      const body = (await resp.json()) as { detail?: string };
      if (body.detail) detail = body.detail;
    } catch {
      // non-JSON error body; keep the status text
    }
    throw new ApiError(resp.status, detail);
  }
  return (await resp.json()) as T;
}

export class EngineClient {
  constructor(
    private baseUrl: string,
    private fetchFn: typeof fetch = fetch,
  ) {}

  profiles(): Promise<Profile[]> {
    return this.get("/profiles");
  }

  policy(profile: number): Promise<PolicySnapshot> {
    return this.get(`/policies/${profile}`);
  }

  beliefs(profile: number, observation: number[]): Promise<BeliefView> {
    return this.get(`/beliefs/${profile}?obs=${observation.join(",")}`);
  }

  events(since: number): Promise<EngineEvent[]> {
    return this.get(`/events?since=${since}`);
  }

  requestExplanation(
    profile: number,
    observation?: number[],
    planId?: string,
  ): Promise<ExplanationRecord> {
    return this.post("/explanations", {
      profile,
      observation: observation ?? null,
      plan_id: planId ?? null,
    });
  }

  submitFeedback(explanationId: string, verdict: Verdict): Promise<{ sequence: number }> {
    return this.post(`/explanations/${explanationId}/feedback`, { verdict });
  }

  private async get<T>(path: string): Promise<T> {
    return asJson<T>(await this.fetchFn(this.baseUrl + path));
  }

  private async post<T>(path: string, body: unknown): Promise<T> {
    return asJson<T>(
      await this.fetchFn(this.baseUrl + path, {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify(body),
      }),
    );
  }
}
