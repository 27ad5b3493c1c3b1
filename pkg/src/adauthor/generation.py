"""Frame sampling and model-driven generation/revision/tagging workflows."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

from .errors import EmptyPrompt, ProviderFailure, UnknownDescription, UnparseableResponse
from .model import AuthorKind
from .prompts import build_generation_prompt, build_revision_prompt, build_tag_prompt
from .provider import FrameBatch, GenerationRequest, ModelProvider
from .vocabulary import sanitize_keywords

FRAME_INTERVAL_MS = 2000
DEFAULT_BATCH_SIZE = 5


def sample_frame_plan(plan, duration_ms: int, frame_rate: float = None):
    """Frame timestamps for each slot at a 2-second cadence.

    Each slot's sequence starts at the slot start and runs up to (exclusive)
    the next slot's start, or the video end for the last slot. Every emitted
    timestamp is < duration_ms.
    """
    slots = plan.slots if hasattr(plan, "slots") else list(plan)
    out = []
    for i, slot in enumerate(slots):
        start = slot.start_ms
        boundary = slots[i + 1].start_ms if i + 1 < len(slots) else duration_ms
        boundary = min(boundary, duration_ms)
        timestamps = list(range(start, boundary, FRAME_INTERVAL_MS))
        out.append((slot, timestamps))
    return out


@dataclass
class RevisionProposal:
    description_id: str
    proposed_text: Optional[str]
    error: Optional[str] = None


def _frame_refs(timestamps, manifest=None):
    """Map sample timestamps to frame refs: manifest filenames when media
    was ingested, synthetic `frame@<ms>` refs otherwise."""
    if not manifest:
        return [f"frame@{ts}" for ts in timestamps]
    refs = []
    for ts in timestamps:
        best = None
        for frame_ms, filename in manifest:
            if frame_ms <= ts:
                best = filename
            else:
                break
        refs.append(best if best is not None else manifest[0][1])
    return refs


def generate_descriptions(
    store,
    variation_id,
    plan,
    provider: ModelProvider,
    batch_size: int = DEFAULT_BATCH_SIZE,
    manifest=None,
):
    """Generate and persist AI descriptions for every planned slot.

    Batches go out in timeline order; every batch after the first carries all
    previously returned texts as prior context. On a provider failure the
    descriptions persisted so far stay persisted and the error is re-raised
    with their ids attached.
    """
    if batch_size < 1:
        raise ValueError("batch_size must be >= 1")
    variation = store.get_variation(variation_id)
    video = store.get_video(variation.video_id)
    prompt = build_generation_prompt(variation.custom_instructions)
    frame_plan = sample_frame_plan(plan, video.duration_ms)
    batches = [
        frame_plan[i : i + batch_size] for i in range(0, len(frame_plan), batch_size)
    ]
    persisted = []
    prior = []
    for batch in batches:
        request = GenerationRequest(
            prompt_text=prompt,
            frame_batches=[
                FrameBatch(slot=_to_adslot(slot), frame_refs=_frame_refs(ts, manifest))
                for slot, ts in batch
            ],
            prior_descriptions=list(prior),
        )
        try:
            results = provider.describe(request)
        except ProviderFailure as exc:
            exc.persisted = [d.id for d in persisted]
            raise
        except Exception as exc:
            raise ProviderFailure(
                f"provider {provider.name!r} failed: {exc}",
                persisted=[d.id for d in persisted],
            ) from exc
        if len(results) != len(batch):
            raise ProviderFailure(
                f"provider returned {len(results)} descriptions for a batch of "
                f"{len(batch)}",
                persisted=[d.id for d in persisted],
            )
        for (slot, _), result in zip(batch, results):
            desc = store.add_description(
                variation_id,
                _to_adslot(slot),
                result.text,
                author_kind=AuthorKind.AI,
                author_name=provider.name,
                guideline_rationale=result.guideline_rationale,
            )
            persisted.append(desc)
            prior.append(result.text)
    return persisted


def _to_adslot(slot):
    from .model import ADSlot

    if isinstance(slot, ADSlot):
        return slot
    return ADSlot(start_ms=slot.start_ms, end_ms=slot.end_ms)


def revise_descriptions(
    store,
    variation_id,
    selected_description_ids,
    user_prompt,
    provider: ModelProvider,
    manifest=None,
    prompt_category=None,
):
    """Propose revisions for the selected descriptions without mutating them.

    One provider call per description; a failing call yields an errored
    proposal while the others still come back. The prompt event and the
    successful proposals are recorded as pending decisions.
    """
    if not user_prompt or not user_prompt.strip():
        raise EmptyPrompt("revision prompt is empty")
    descriptions = {d.id: d for d in store.descriptions_for(variation_id)}
    for desc_id in selected_description_ids:
        if desc_id not in descriptions:
            raise UnknownDescription(
                f"description {desc_id!r} is not in variation {variation_id!r}"
            )
    results = []
    for desc_id in selected_description_ids:
        desc = descriptions[desc_id]
        prompt = build_revision_prompt(user_prompt, desc.text)
        timestamps = list(
            range(desc.slot.start_ms, desc.slot.end_ms, FRAME_INTERVAL_MS)
        )
        refs = _frame_refs(timestamps, manifest)
        try:
            text = provider.complete(prompt, refs)
            results.append(RevisionProposal(desc_id, text))
        except Exception as exc:
            results.append(RevisionProposal(desc_id, None, error=str(exc)))
    store.register_proposals(
        variation_id,
        user_prompt,
        [(r.description_id, r.proposed_text) for r in results if r.proposed_text],
        prompt_category=prompt_category,
    )
    return results


_BRACKET_RE = re.compile(r"\[([^\[\]]*)\]")


def _parse_keyword_list(body: str):
    items = []
    for piece in body.split(","):
        token = piece.strip().strip("\"'").strip()
        if token:
            items.append(token)
    return items


def generate_tags(descriptions, provider: ModelProvider):
    """Ask the provider for tags and coerce the reply into a valid TagSet.

    Returns (TagSet, warnings). The first bracketed list in the response is
    the predefined keywords, the second (optional) the custom ones.
    """
    if not descriptions:
        raise ValueError("at least one description is required")
    prompt = build_tag_prompt(descriptions)
    try:
        response = provider.complete(prompt, [])
    except ProviderFailure:
        raise
    except Exception as exc:
        raise ProviderFailure(f"provider {provider.name!r} failed: {exc}") from exc
    lists = _BRACKET_RE.findall(response)
    if not lists:
        raise UnparseableResponse("no bracketed keyword lists in provider response")
    keywords = _parse_keyword_list(lists[0])
    additional = _parse_keyword_list(lists[1]) if len(lists) > 1 else []
    return sanitize_keywords(keywords, additional)
