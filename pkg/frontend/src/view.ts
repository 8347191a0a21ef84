/**
 * Pure HTML-string renderers. Every function here is a function of its
 * arguments only (no clocks, no locale, no DOM), so views can be
 * snapshot-tested and the page re-renders from state alone.
 */

import { criterionFor } from "./criteria.js";
import type { Attempt, SessionState } from "./types.js";

const ESCAPES: Record<string, string> = {
  "&": "&amp;",
  "<": "&lt;",
  ">": "&gt;",
  '"': "&quot;",
  "'": "&#39;",
};

export function escapeHtml(text: string): string {
  return text.replace(/[&<>"']/g, (ch) => ESCAPES[ch] ?? ch);
}

export function formatProbability(probability: number): string {
  return probability.toFixed(3);
}

/** Compact display for feature values (22 -> "22", 8.2513286 -> "8.251"). */
export function formatValue(value: number): string {
  if (!Number.isFinite(value)) {
    return String(value);
  }
  return String(Number(value.toPrecision(4)));
}

function formatClock(timestamp: number): string {
  // UTC wall clock; deterministic across machines
  return new Date(timestamp).toISOString().slice(11, 19) + " UTC";
}

export function renderGauge(probability: number): string {
  const pct = (probability * 100).toFixed(1);
  return (
    `<div class="gauge" role="meter" aria-valuemin="0" aria-valuemax="1"` +
    ` aria-valuenow="${probability}">` +
    `<div class="gauge-fill" style="width:${pct}%"></div>` +
    `<span class="gauge-value">P(improved) = ${formatProbability(probability)}</span>` +
    `</div>`
  );
}

function renderContribution(name: string, value: number): string {
  const criterion = criterionFor(name);
  const tag = criterion === null ? "General signal" : criterion.label;
  const tagClass = criterion === null ? "general" : criterion.id;
  return (
    `<li class="contribution">` +
    `<span class="criterion criterion-${tagClass}">${escapeHtml(tag)}</span>` +
    `<code class="feature-name">${escapeHtml(name)}</code>` +
    `<span class="feature-value">${escapeHtml(formatValue(value))}</span>` +
    `</li>`
  );
}

export function renderVerdictCard(attempt: Attempt, index: number): string {
  const verdictClass = attempt.label === "Better" ? "better" : "not-better";
  const items = attempt.contributions
    .map((c) => renderContribution(c.name, c.value))
    .join("");
  return (
    `<article class="verdict-card ${verdictClass}"` +
    ` data-probability="${attempt.probability}">` +
    `<header>` +
    `<span class="attempt-number">Attempt ${index + 1}</span>` +
    `<span class="verdict-label">${escapeHtml(attempt.label)}</span>` +
    `<time>${formatClock(attempt.timestamp)}</time>` +
    `</header>` +
    `<p class="s2-text">${escapeHtml(attempt.s2Text)}</p>` +
    renderGauge(attempt.probability) +
    `<ul class="contributions">${items}</ul>` +
    `<footer class="model-id">model ${escapeHtml(attempt.modelId)}</footer>` +
    `</article>`
  );
}

/** Probability trend across attempts as an inline SVG sparkline. */
export function renderTrend(attempts: Attempt[]): string {
  if (attempts.length === 0) {
    return "";
  }
  const points = attempts.map((a, i) => {
    const x =
      attempts.length === 1 ? 50 : (i / (attempts.length - 1)) * 100;
    const y = 100 - a.probability * 100;
    return `${x.toFixed(2)},${y.toFixed(2)}`;
  });
  const dots = points
    .map((p) => {
      const [x, y] = p.split(",");
      return `<circle cx="${x}" cy="${y}" r="3"></circle>`;
    })
    .join("");
  const line =
    points.length > 1
      ? `<polyline points="${points.join(" ")}" fill="none"></polyline>`
      : "";
  return (
    `<figure class="trend" aria-label="probability across attempts">` +
    `<svg viewBox="-4 -4 108 108" preserveAspectRatio="none">${line}${dots}</svg>` +
    `</figure>`
  );
}

export function renderHistory(state: SessionState): string {
  if (state.attempts.length === 0) {
    return (
      `<p class="empty-state">No attempts yet. Paste the original sentence,` +
      ` draft a revision, and submit to see whether it reads as an` +
      ` improvement. History lives in this tab only and clears on reload.</p>`
    );
  }
  const cards = state.attempts
    .map((attempt, i) => renderVerdictCard(attempt, i))
    .join("");
  return renderTrend(state.attempts) + `<div class="history">${cards}</div>`;
}

export function renderBanner(state: SessionState): string {
  if (state.banner === null) {
    return "";
  }
  return `<div class="banner" role="alert">${escapeHtml(state.banner)}</div>`;
}

export function renderFieldError(state: SessionState): string {
  if (state.fieldError === null) {
    return "";
  }
  const { field, message } = state.fieldError;
  return (
    `<p class="field-error" data-field="${field}">${escapeHtml(message)}</p>`
  );
}

/** The whole dynamic region of the page as a function of session state. */
export function renderApp(state: SessionState): string {
  const pending = state.pending
    ? `<p class="pending">scoring&hellip;</p>`
    : "";
  return (
    renderBanner(state) +
    renderFieldError(state) +
    pending +
    renderHistory(state)
  );
}
