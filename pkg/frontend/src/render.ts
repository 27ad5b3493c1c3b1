/**
 * Pure HTML-string renderers.
 *
 * No DOM dependency: each function maps server/editor state to a markup
 * string so rendering is unit-testable in Node and trivially insertable
 * via innerHTML in the browser shell.
 */

import { DescriptionDto, DiffOpDto, VariationDto } from "./api.js";
import { PendingProposal } from "./state.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function formatMs(ms: number): string {
  const s = Math.floor(ms / 1000);
  const mm = String(Math.floor(s / 60)).padStart(2, "0");
  const ss = String(s % 60).padStart(2, "0");
  return `${mm}:${ss}.${String(ms % 1000).padStart(3, "0")}`;
}

/** One marker per description, positioned as a percentage of the timeline. */
export function renderTimelineMarkers(
  descriptions: DescriptionDto[],
  durationMs: number,
): string {
  const markers = descriptions
    .map((d) => {
      const left = ((d.slot.start_ms / durationMs) * 100).toFixed(3);
      return (
        `<button class="marker" data-seek-ms="${d.slot.start_ms}" ` +
        `style="left:${left}%" title="${formatMs(d.slot.start_ms)}"></button>`
      );
    })
    .join("");
  return `<div class="timeline">${markers}</div>`;
}

export function renderDescriptionList(
  descriptions: DescriptionDto[],
  selection: Set<string>,
): string {
  const items = descriptions
    .map((d) => {
      const selected = selection.has(d.id) ? " selected" : "";
      const label = selection.has(d.id) ? "DESELECT" : "SELECT";
      return (
        `<li class="description${selected}" data-id="${d.id}">` +
        `<span class="slot">${formatMs(d.slot.start_ms)}–${formatMs(d.slot.end_ms)}</span>` +
        `<span class="text">${escapeHtml(d.text)}</span>` +
        `<button class="select-toggle" data-id="${d.id}">${label}</button>` +
        `</li>`
      );
    })
    .join("");
  return `<ul class="descriptions">${items}</ul>`;
}

export function renderDiffOps(ops: DiffOpDto[]): string {
  return ops
    .map((op) => {
      const text = escapeHtml(op.tokens.join(" "));
      if (op.op === "insert") return `<ins>${text}</ins>`;
      if (op.op === "delete") return `<del>${text}</del>`;
      return `<span>${text}</span>`;
    })
    .join(" ");
}

/** Side-by-side old/new card with Accept/Reject controls. */
export function renderDiffCard(
  description: DescriptionDto,
  proposal: PendingProposal,
): string {
  return (
    `<div class="diff-card" data-id="${description.id}">` +
    `<div class="old">${escapeHtml(description.text)}</div>` +
    `<div class="new">${escapeHtml(proposal.proposedText)}</div>` +
    `<div class="diff">${renderDiffOps(proposal.diff)}</div>` +
    `<button class="accept" data-id="${description.id}">Accept</button>` +
    `<button class="reject" data-id="${description.id}">Reject</button>` +
    `</div>`
  );
}

export function renderDiffCards(
  descriptions: DescriptionDto[],
  proposals: Map<string, PendingProposal>,
): string {
  const cards = descriptions
    .filter((d) => proposals.has(d.id))
    .map((d) => renderDiffCard(d, proposals.get(d.id)!))
    .join("");
  const bulk =
    proposals.size > 0
      ? `<button class="accept-all">Accept all</button>` +
        `<button class="reject-all">Reject all</button>`
      : "";
  return `<div class="diff-cards">${cards}${bulk}</div>`;
}

export function renderVariationCard(variation: VariationDto, parentName?: string): string {
  const tags = [
    ...variation.tags.predefined.map(([, kw]) => kw),
    ...variation.tags.custom,
  ]
    .map((kw) => `<span class="tag">${escapeHtml(kw)}</span>`)
    .join("");
  const parent = parentName
    ? `<span class="parent">forked from ${escapeHtml(parentName)}</span>`
    : "";
  return (
    `<div class="variation-card" data-id="${variation.id}">` +
    `<h3>${escapeHtml(variation.name)}</h3>` +
    `<span class="author">${escapeHtml(variation.author_name)}</span>` +
    `<span class="fork-count">Forks: ${variation.fork_count}</span>` +
    parent +
    `<div class="tags">${tags}</div>` +
    `<button class="preview" data-id="${variation.id}">PREVIEW</button>` +
    `<button class="fork" data-id="${variation.id}">FORK VARIATION</button>` +
    `</div>`
  );
}

export function renderVariationCards(variations: VariationDto[]): string {
  const byId = new Map(variations.map((v) => [v.id, v.name]));
  return (
    `<div class="variation-cards">` +
    variations
      .map((v) =>
        renderVariationCard(v, v.parent_id ? byId.get(v.parent_id) : undefined),
      )
      .join("") +
    `</div>`
  );
}

export function renderErrorBanner(code: string, message: string): string {
  return (
    `<div class="error-banner" role="alert">` +
    `<strong>${escapeHtml(code)}</strong> ${escapeHtml(message)}` +
    `<button class="retry">Retry</button>` +
    `<button class="dismiss">Dismiss</button>` +
    `</div>`
  );
}
