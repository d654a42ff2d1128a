// Browser wiring: one ConsoleSession, DOM updates after every action, and a
// polling loop for the adaptation timeline.

import { EngineClient } from "./api.js";
import {
  renderBanner,
  renderBeliefBars,
  renderExplanation,
  renderPolicyPanel,
  renderProfilePicker,
  renderTimeline,
} from "./render.js";
import { ConsoleSession } from "./session.js";

const ENGINE_URL = (window as { ENGINE_URL?: string }).ENGINE_URL ?? "http://127.0.0.1:8000";
const POLL_MS = 2000;

const session = new ConsoleSession(new EngineClient(ENGINE_URL));

function el(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (node === null) throw new Error(`missing element #${id}`);
  return node;
}

function redraw(): void {
  const view = session.view();
  el("banner").innerHTML = renderBanner(view.banner);
  el("picker").innerHTML = renderProfilePicker(view);
  el("explanation").innerHTML = renderExplanation(view);
  el("policy").innerHTML = renderPolicyPanel(view.policy);
  el("beliefs").innerHTML = renderBeliefBars(view.beliefs?.beliefs);
  el("timeline").innerHTML = renderTimeline(view.timeline);
  bind();
}

function bind(): void {
  const picker = document.getElementById("profilePicker") as HTMLSelectElement | null;
  picker?.addEventListener("change", () => {
    session.selectProfile(Number(picker.value));
    redraw();
  });
  document.getElementById("btnAccept")?.addEventListener("click", () => {
    void session.submitFeedback("accepted").then(redraw);
  });
  document.getElementById("btnReject")?.addEventListener("click", () => {
    void session.submitFeedback("rejected").then(redraw);
  });
  document.getElementById("btnRetry")?.addEventListener("click", () => {
    void session.requestExplanation().then(redraw);
  });
}

el("btnRequest").addEventListener("click", () => {
  const raw = (el("observation") as HTMLInputElement).value.trim();
  const observation = raw ? raw.split(",").map(Number) : undefined;
  void session.requestExplanation(observation).then(redraw);
});

void session.start().then(() => {
  redraw();
  setInterval(() => {
    void session.pollEvents().then(redraw);
  }, POLL_MS);
});
