// Pure HTML-string renderers so the view layer is testable without a DOM.

import type { SessionView, TimelineEntry } from "./session.js";
import type { PolicySnapshot, SkillBelief } from "./types.js";

const SLOT_NAMES: Record<number, string> = {
  1: "detail",
  2: "tone",
  3: "format",
};

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function renderBadges(choices: [number, number][]): string {
  const badges = choices
    .map(([p, q]) => {
      const name = SLOT_NAMES[p] ?? `slot ${p}`;
      return `<span class="badge" data-slot="${p}" data-option="${q}">${name}: p${p}_q${q}</span>`;
    })
    .join(" ");
  return `<div class="badges">${badges}</div>`;
}

export function renderExplanation(view: SessionView): string {
  if (view.explanation === null) {
    return `<p class="empty">No explanation requested yet.</p>`;
  }
  const record = view.explanation;
  const disabled = view.voted ? " disabled" : "";
  return [
    renderBadges(record.choices),
    `<pre class="explanation">${escapeHtml(record.explanation)}</pre>`,
    `<div class="vote">`,
    `<button id="btnAccept"${disabled}>Accept</button>`,
    `<button id="btnReject"${disabled}>Reject</button>`,
    `</div>`,
  ].join("\n");
}

export function renderPolicyPanel(policy: PolicySnapshot | null): string {
  if (policy === null) return `<p class="empty">No policy loaded.</p>`;
  const rows = policy.choices
    .map((row) => {
      const obs = row.observation.join(",");
      const picks = row.options.map(([p, q]) => `p${p}_q${q}`).join(" ");
      return `<tr><td>${obs}</td><td>${picks}</td></tr>`;
    })
    .join("");
  return [
    `<p>value ${policy.value.toFixed(3)} · ledger seq ${policy.provenance.ledger_sequence}</p>`,
    `<table class="policy"><tr><th>predicted levels</th><th>choices</th></tr>${rows}</table>`,
  ].join("\n");
}

export function renderBeliefBars(beliefs: SkillBelief[] | undefined): string {
  if (!beliefs || beliefs.length === 0) return `<p class="empty">No belief to show.</p>`;
  return beliefs
    .map((b) => {
      const bars = b.posterior
        .map((mass, i) => {
          const pct = Math.round(mass * 100);
          return (
            `<div class="bar-row"><span class="bar-label">${b.levels[i]}</span>` +
            `<div class="bar" style="width:${pct}%"></div><span>${pct}%</span></div>`
          );
        })
        .join("");
      return `<div class="skill"><h4>${escapeHtml(b.skill)}</h4>${bars}</div>`;
    })
    .join("\n");
}

export function renderTimeline(entries: TimelineEntry[]): string {
  if (entries.length === 0) return `<p class="empty">No events yet.</p>`;
  const items = entries
    .map((e) => {
      const badges = e.choices ? " " + renderBadges(e.choices) : "";
      return `<li data-seq="${e.sequence}" data-kind="${e.kind}">${escapeHtml(e.summary)}${badges}</li>`;
    })
    .join("");
  return `<ol class="timeline">${items}</ol>`;
}

export function renderBanner(banner: string | null): string {
  if (banner === null) return "";
  return `<div class="banner" role="alert">${escapeHtml(banner)} <button id="btnRetry">Retry</button></div>`;
}

export function renderProfilePicker(view: SessionView): string {
  const options = view.profiles
    .map((p) => {
      const selected = p.id === view.selectedProfile ? " selected" : "";
      return `<option value="${p.id}"${selected}>${escapeHtml(p.name)}</option>`;
    })
    .join("");
  return `<select id="profilePicker">${options}</select>`;
}
