/**
 * Editor state machine.
 *
 * Holds the mirror of the server's description list plus purely local UI
 * state: the selection, pending revision proposals, and per-description
 * dirty flags. Invariants enforced here:
 *   - the selection is always a subset of the loaded descriptions;
 *   - a description with a pending proposal is locked against manual text
 *     editing until the proposal is resolved;
 *   - each proposal dispatches exactly one resolve call.
 */

import {
  ApiClient,
  DescriptionDto,
  DiffOpDto,
  ProposalDto,
  VariationDetailDto,
} from "./api.js";

export interface PendingProposal {
  descriptionId: string;
  proposedText: string;
  diff: DiffOpDto[];
  resolving: boolean;
}

export interface ProposalFailure {
  descriptionId: string;
  error: string;
}

export class EditorState {
  variation: VariationDetailDto | null = null;
  descriptions: DescriptionDto[] = [];
  selection = new Set<string>();
  pendingProposals = new Map<string, PendingProposal>();
  proposalFailures: ProposalFailure[] = [];
  dirty = new Set<string>();

  constructor(private readonly api: ApiClient) {}

  /** Load (or reload) a variation, dropping any stale local UI state. */
  async loadVariation(variationId: string): Promise<void> {
    const detail = await this.api.getVariation(variationId);
    this.variation = detail;
    this.descriptions = detail.descriptions;
    const loaded = new Set(detail.descriptions.map((d) => d.id));
    for (const id of this.selection) {
      if (!loaded.has(id)) this.selection.delete(id);
    }
    for (const id of this.pendingProposals.keys()) {
      if (!loaded.has(id)) this.pendingProposals.delete(id);
    }
    for (const id of this.dirty) {
      if (!loaded.has(id)) this.dirty.delete(id);
    }
  }

  private requireLoaded(descriptionId: string): DescriptionDto {
    const found = this.descriptions.find((d) => d.id === descriptionId);
    if (!found) {
      throw new Error(`description ${descriptionId} is not loaded`);
    }
    return found;
  }

  toggleSelect(descriptionId: string): boolean {
    this.requireLoaded(descriptionId);
    if (this.selection.has(descriptionId)) {
      this.selection.delete(descriptionId);
      return false;
    }
    this.selection.add(descriptionId);
    return true;
  }

  /** Manual edits are disallowed while a proposal is awaiting a decision. */
  canEditText(descriptionId: string): boolean {
    return !this.pendingProposals.has(descriptionId);
  }

  async editText(descriptionId: string, text: string, author: string): Promise<void> {
    this.requireLoaded(descriptionId);
    if (!this.canEditText(descriptionId)) {
      throw new Error(
        `description ${descriptionId} has a pending proposal; resolve it first`,
      );
    }
    this.dirty.add(descriptionId);
    const updated = await this.api.editDescriptionText(descriptionId, text, author);
    this.replaceDescription(updated);
    this.dirty.delete(descriptionId);
  }

  async submitPrompt(promptText: string, promptCategory?: string): Promise<ProposalDto[]> {
    if (this.selection.size === 0) {
      throw new Error("select at least one description first");
    }
    if (!promptText.trim()) {
      throw new Error("prompt must not be empty");
    }
    if (!this.variation) {
      throw new Error("no variation loaded");
    }
    const ids = this.descriptions
      .filter((d) => this.selection.has(d.id))
      .map((d) => d.id); // timeline order, not insertion order
    const { proposals } = await this.api.revise(
      this.variation.id,
      ids,
      promptText,
      promptCategory,
    );
    this.proposalFailures = [];
    for (const proposal of proposals) {
      if (proposal.proposed_text === null) {
        this.proposalFailures.push({
          descriptionId: proposal.description_id,
          error: proposal.error ?? "unknown provider error",
        });
        continue;
      }
      this.pendingProposals.set(proposal.description_id, {
        descriptionId: proposal.description_id,
        proposedText: proposal.proposed_text,
        diff: proposal.diff ?? [],
        resolving: false,
      });
    }
    return proposals;
  }

  /** Resolve one pending proposal; guards against double-submit. */
  async resolveProposal(descriptionId: string, decision: "ACCEPT" | "REJECT"): Promise<void> {
    const pending = this.pendingProposals.get(descriptionId);
    if (!pending) {
      throw new Error(`no pending proposal for ${descriptionId}`);
    }
    if (pending.resolving) {
      throw new Error(`proposal for ${descriptionId} is already being resolved`);
    }
    pending.resolving = true;
    try {
      const updated = await this.api.resolve(descriptionId, decision);
      this.replaceDescription(updated);
      this.pendingProposals.delete(descriptionId);
    } catch (err) {
      pending.resolving = false;
      throw err;
    }
  }

  async acceptAll(): Promise<void> {
    for (const id of [...this.pendingProposals.keys()]) {
      await this.resolveProposal(id, "ACCEPT");
    }
  }

  async rejectAll(): Promise<void> {
    for (const id of [...this.pendingProposals.keys()]) {
      await this.resolveProposal(id, "REJECT");
    }
  }

  /** True when leaving this variation would lose unsaved work. */
  hasUnsavedWork(): boolean {
    return this.dirty.size > 0 || this.pendingProposals.size > 0;
  }

  private replaceDescription(updated: DescriptionDto): void {
    this.descriptions = this.descriptions.map((d) =>
      d.id === updated.id ? updated : d,
    );
  }
}
