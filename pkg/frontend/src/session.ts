// Console session state. All engine interaction funnels through the
// EngineClient; this module owns the invariants the UI must not break:
// feedback only for the currently displayed explanation, exactly once, and
// an event cursor that falls back to a full refetch when it sees a gap.

import { ApiError, EngineClient } from "./api.js";
import type {
  BeliefView,
  EngineEvent,
  ExplanationRecord,
  PolicySnapshot,
  Profile,
  Verdict,
} from "./types.js";

export interface TimelineEntry {
  sequence: number;
  kind: string;
  at: string;
  summary: string;
  choices?: [number, number][];
}

export interface SessionView {
  profiles: Profile[];
  selectedProfile: number | null;
  explanation: ExplanationRecord | null;
  voted: boolean;
  policy: PolicySnapshot | null;
  beliefs: BeliefView | null;
  timeline: TimelineEntry[];
  banner: string | null;
}

function summarize(event: EngineEvent): TimelineEntry {
  const payload = event.payload;
  let summary: string;
  let choices: [number, number][] | undefined;
  switch (event.kind) {
    case "explanation":
      choices = payload["choices"] as [number, number][];
      summary = `explanation ${payload["id"]} for profile ${payload["profile"]}`;
      break;
    case "feedback":
      summary = `feedback: ${payload["verdict"]}`;
      break;
    case "policy_synthesized":
      summary = `policy re-synthesized for profile ${payload["profile"]}`;
      break;
    case "cognitive_model_updated":
      summary = "cognitive model updated";
      break;
    case "profile_changed":
      summary = `active profile set to ${payload["profile"]}`;
      break;
    default:
      summary = event.kind;
  }
  return { sequence: event.sequence, kind: event.kind, at: event.at, summary, choices };
}

export class ConsoleSession {
  profiles: Profile[] = [];
  selectedProfile: number | null = null;
  explanation: ExplanationRecord | null = null;
  voted = false;
  policy: PolicySnapshot | null = null;
  beliefs: BeliefView | null = null;
  timeline: TimelineEntry[] = [];
  banner: string | null = null;
  private cursor = 0;

  constructor(private client: EngineClient) {}

  view(): SessionView {
    return {
      profiles: this.profiles,
      selectedProfile: this.selectedProfile,
      explanation: this.explanation,
      voted: this.voted,
      policy: this.policy,
      beliefs: this.beliefs,
      timeline: this.timeline,
      banner: this.banner,
    };
  }

  async start(): Promise<void> {
    this.profiles = await this.client.profiles();
    if (this.profiles.length > 0 && this.selectedProfile === null) {
      this.selectedProfile = this.profiles[0].id;
    }
    await this.pollEvents();
  }

  selectProfile(profile: number): void {
    if (!this.profiles.some((p) => p.id === profile)) {
      throw new Error(`unknown profile ${profile}`);
    }
    this.selectedProfile = profile;
    // a new profile means the displayed explanation no longer applies
    this.explanation = null;
    this.voted = false;
    this.policy = null;
    this.beliefs = null;
  }

  /** Request an explanation; engine errors surface as a banner, not a crash. */
  async requestExplanation(observation?: number[], planId?: string): Promise<boolean> {
    if (this.selectedProfile === null) throw new Error("no profile selected");
    try {
      this.explanation = await this.client.requestExplanation(
        this.selectedProfile,
        observation,
        planId,
      );
      this.voted = false;
      this.banner = null;
      await this.refreshPanels();
      return true;
    } catch (err) {
      this.banner = err instanceof ApiError ? err.message : `engine unreachable: ${err}`;
      return false;
    }
  }

  /** One vote per displayed explanation; a second attempt never reaches the wire. */
  async submitFeedback(verdict: Verdict): Promise<boolean> {
    if (this.explanation === null) throw new Error("no explanation displayed");
    if (this.voted) throw new Error("feedback already submitted for this explanation");
    this.voted = true; // optimistic disable; reverted only on transport failure
    try {
      await this.client.submitFeedback(this.explanation.id, verdict);
      await this.refreshPanels();
      return true;
    } catch (err) {
      if (err instanceof ApiError && err.status === 409) {
        // server already counted it; keep the control disabled
        this.banner = err.message;
        return false;
      }
      this.voted = false;
      this.banner = err instanceof ApiError ? err.message : `engine unreachable: ${err}`;
      return false;
    }
  }

  async refreshPanels(): Promise<void> {
    if (this.selectedProfile === null) return;
    this.policy = await this.client.policy(this.selectedProfile);
    if (this.explanation !== null) {
      this.beliefs = await this.client.beliefs(
        this.selectedProfile,
        this.explanation.observation,
      );
    }
    await this.pollEvents();
  }

  /** Poll /events; a sequence gap forces a refetch from zero. */
  async pollEvents(): Promise<void> {
    let events = await this.client.events(this.cursor);
    if (events.length > 0 && this.cursor > 0 && events[0].sequence !== this.cursor + 1) {
      this.cursor = 0;
      this.timeline = [];
      events = await this.client.events(0);
    }
    for (const event of events) {
      this.timeline.push(summarize(event));
      this.cursor = event.sequence;
    }
  }
}
