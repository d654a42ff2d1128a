import { describe, expect, it } from "vitest";

import {
  escapeHtml,
  renderBadges,
  renderBanner,
  renderBeliefBars,
  renderExplanation,
  renderPolicyPanel,
  renderTimeline,
} from "../src/render.js";
import type { SessionView } from "../src/session.js";

function baseView(overrides: Partial<SessionView> = {}): SessionView {
  return {
    profiles: [],
    selectedProfile: 1,
    explanation: null,
    voted: false,
    policy: null,
    beliefs: null,
    timeline: [],
    banner: null,
    ...overrides,
  };
}

describe("badges", () => {
  it("labels the three catalog slots", () => {
    const html = renderBadges([[1, 2], [2, 2], [3, 1]]);
    expect(html).toContain("detail: p1_q2");
    expect(html).toContain("tone: p2_q2");
    expect(html).toContain("format: p3_q1");
  });

  it("falls back to a generic label for unknown slots", () => {
    expect(renderBadges([[7, 1]])).toContain("slot 7: p7_q1");
  });
});

describe("explanation panel", () => {
  const record = {
    version: 1,
    id: "exp-1",
    profile: 1,
    observation: [3, 3],
    choices: [[1, 1], [2, 1], [3, 2]] as [number, number][],
    prompt: "p",
    backend: "mock",
    explanation: "a <plan> walkthrough",
    plan_id: "plan-1",
    created_at: "t",
    ledger_sequence: 0,
    feedback: null,
  };

  it("escapes explanation text and shows vote buttons", () => {
    const html = renderExplanation(baseView({ explanation: record }));
    expect(html).toContain("&lt;plan&gt;");
    expect(html).toContain('id="btnAccept"');
    expect(html).not.toContain("disabled");
  });

  it("disables voting once voted", () => {
    const html = renderExplanation(baseView({ explanation: record, voted: true }));
    expect(html).toContain('id="btnAccept" disabled');
  });

  it("shows an empty state with no explanation", () => {
    expect(renderExplanation(baseView())).toContain("No explanation requested yet");
  });
});

describe("policy and belief panels", () => {
  it("renders the ledger sequence and choice rows", () => {
    const html = renderPolicyPanel({
      profile: 1,
      value: 46.8485,
      choices: [{ observation: [3, 3], options: [[1, 1], [2, 1], [3, 2]] }],
      provenance: { ledger_sequence: 7, model_hash: "m", params_hash: "p" },
    });
    expect(html).toContain("ledger seq 7");
    expect(html).toContain("p1_q1 p2_q1 p3_q2");
  });

  it("renders per-skill bars with percentages", () => {
    const html = renderBeliefBars([
      { skill: "attention", levels: ["low", "med", "high"], posterior: [0.1, 0.2, 0.7] },
    ]);
    expect(html).toContain("attention");
    expect(html).toContain("width:70%");
  });

  it("handles missing beliefs", () => {
    expect(renderBeliefBars(undefined)).toContain("No belief to show");
  });
});

describe("timeline", () => {
  it("renders entries in order with badges for explanations", () => {
    const html = renderTimeline([
      { sequence: 1, kind: "explanation", at: "t", summary: "explanation exp-1", choices: [[1, 2]] },
      { sequence: 2, kind: "feedback", at: "t", summary: "feedback: accepted" },
    ]);
    const first = html.indexOf('data-seq="1"');
    const second = html.indexOf('data-seq="2"');
    expect(first).toBeGreaterThan(-1);
    expect(second).toBeGreaterThan(first);
    expect(html).toContain("detail: p1_q2");
  });

  it("shows an empty state", () => {
    expect(renderTimeline([])).toContain("No events yet");
  });
});

describe("banner", () => {
  it("is empty without an error", () => {
    expect(renderBanner(null)).toBe("");
  });

  it("offers a retry affordance", () => {
    const html = renderBanner("engine returned 502: backend down");
    expect(html).toContain("btnRetry");
    expect(html).toContain("502");
  });

  it("escapes the message", () => {
    expect(escapeHtml("<script>")).toBe("&lt;script&gt;");
  });
});
