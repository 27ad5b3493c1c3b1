"""Project store: videos, variations, descriptions, edit log, proposals.

All mutations go through a single writer lock; reads see only committed
state. Fork creates a deep copy of the parent's descriptions and a
fork-time snapshot so the edit log can be replayed from a known base.
"""

from __future__ import annotations

import copy
import threading
import time
import uuid
from typing import Optional

from .errors import (
    DuplicateName,
    EmptyText,
    NoPendingProposal,
    OrderingViolation,
    OutOfBounds,
    UnknownDescription,
    UnknownVariation,
    UnknownVideo,
    VariationHasChildren,
)
from .model import (
    ADSlot,
    AuthorKind,
    Description,
    EditLogEntry,
    LogKind,
    MAX_PLANNED_SLOT_MS,
    TagSet,
    VideoAsset,
    Variation,
)
from .vocabulary import validate_tag_set

PROPOSAL_TTL_SECONDS = 24 * 3600


class ProjectStore:
    def __init__(self, clock=None, id_factory=None):
        self._clock = clock or time.time
        self._id_factory = id_factory or (lambda: uuid.uuid4().hex)
        self._lock = threading.Lock()
        self._last_ts = float("-inf")
        self.videos = {}
        self.variations = {}
        self.descriptions = {}
        self.edit_log = []
        # variation id -> list of description records at creation/fork time
        self.snapshots = {}
        # description id -> {"prompt_event_id", "text", "created_at"}
        self.proposals = {}
        # prompt event id -> {"accepted": n, "rejected": n}
        self.decision_counters = {}

    # -- infrastructure -----------------------------------------------------

    def _now(self) -> float:
        ts = self._clock()
        if ts <= self._last_ts:
            ts = self._last_ts + 1e-6
        self._last_ts = ts
        return ts

    def _new_id(self) -> str:
        return self._id_factory()

    def _append_log(self, variation_id, kind, payload, prompt_category=None):
        entry = EditLogEntry(
            id=self._new_id(),
            variation_id=variation_id,
            kind=kind,
            payload=payload,
            at=self._now(),
            prompt_category=prompt_category,
        )
        self.edit_log.append(entry)
        return entry

    def _video(self, video_id) -> VideoAsset:
        if video_id not in self.videos:
            raise UnknownVideo(f"no video {video_id!r}")
        return self.videos[video_id]

    def _variation(self, variation_id) -> Variation:
        if variation_id not in self.variations:
            raise UnknownVariation(f"no variation {variation_id!r}")
        return self.variations[variation_id]

    def _description(self, description_id) -> Description:
        if description_id not in self.descriptions:
            raise UnknownDescription(f"no description {description_id!r}")
        return self.descriptions[description_id]

    # public lookups
    def get_video(self, video_id) -> VideoAsset:
        return self._video(video_id)

    def get_variation(self, variation_id) -> Variation:
        return self._variation(variation_id)

    def get_description(self, description_id) -> Description:
        return self._description(description_id)

    def descriptions_for(self, variation_id):
        self._variation(variation_id)
        items = [d for d in self.descriptions.values() if d.variation_id == variation_id]
        return sorted(items, key=lambda d: d.slot.start_ms)

    def log_for(self, variation_id):
        return [e for e in self.edit_log if e.variation_id == variation_id]

    def children_of(self, variation_id):
        return [v for v in self.variations.values() if v.parent_id == variation_id]

    # -- videos --------------------------------------------------------------

    def add_video(self, asset: VideoAsset) -> VideoAsset:
        with self._lock:
            self.videos[asset.id] = asset
        return asset

    # -- variations ----------------------------------------------------------

    def create_variation(self, video_id, name, author_name, custom_instructions=None):
        with self._lock:
            self._video(video_id)
            if not name or not name.strip():
                raise EmptyText("variation name is empty")
            if any(
                v.video_id == video_id and v.name == name
                for v in self.variations.values()
            ):
                raise DuplicateName(f"variation name {name!r} already used for this video")
            variation = Variation(
                id=self._new_id(),
                video_id=video_id,
                name=name,
                author_name=author_name,
                created_at=self._now(),
                custom_instructions=custom_instructions,
            )
            self.variations[variation.id] = variation
            self.snapshots[variation.id] = []
        return variation

    def fork_variation(self, parent_id, new_author_name, new_name=None):
        with self._lock:
            parent = self._variation(parent_id)
            if new_name is None:
                new_name = self._synthesize_fork_name(parent)
            elif any(
                v.video_id == parent.video_id and v.name == new_name
                for v in self.variations.values()
            ):
                raise DuplicateName(f"variation name {new_name!r} already used")
            child = Variation(
                id=self._new_id(),
                video_id=parent.video_id,
                name=new_name,
                author_name=new_author_name,
                created_at=self._now(),
                parent_id=parent_id,
                tags=copy.deepcopy(parent.tags),
                custom_instructions=parent.custom_instructions,
            )
            snapshot = []
            for d in self.descriptions_for(parent_id):
                new_desc = Description(
                    id=self._new_id(),
                    variation_id=child.id,
                    slot=d.slot,
                    text=d.text,
                    author_kind=d.author_kind,
                    author_name=d.author_name,
                    created_at=self._now(),
                    modified_at=self._now(),
                    guideline_rationale=d.guideline_rationale,
                    warnings=list(d.warnings),
                )
                snapshot.append(self._description_record(new_desc))
                self.descriptions[new_desc.id] = new_desc
            # count increment + child insertion commit together
            parent.fork_count += 1
            self.variations[child.id] = child
            self.snapshots[child.id] = snapshot
        return child

    def _synthesize_fork_name(self, parent):
        n = 1
        taken = {
            v.name for v in self.variations.values() if v.video_id == parent.video_id
        }
        while f"{parent.name} fork {n}" in taken:
            n += 1
        return f"{parent.name} fork {n}"

    def delete_variation(self, variation_id):
        with self._lock:
            variation = self._variation(variation_id)
            if self.children_of(variation_id):
                raise VariationHasChildren(
                    f"variation {variation_id!r} has forks and cannot be deleted"
                )
            if variation.parent_id and variation.parent_id in self.variations:
                self.variations[variation.parent_id].fork_count -= 1
            for d in self.descriptions_for(variation_id):
                del self.descriptions[d.id]
            self.edit_log = [e for e in self.edit_log if e.variation_id != variation_id]
            self.snapshots.pop(variation_id, None)
            for desc_id in [
                i for i, p in self.proposals.items() if p["variation_id"] == variation_id
            ]:
                del self.proposals[desc_id]
            del self.variations[variation_id]

    def set_tags(self, variation_id, tag_set: TagSet):
        with self._lock:
            variation = self._variation(variation_id)
            validate_tag_set(tag_set)
            old = variation.tags
            variation.tags = TagSet.from_dict(tag_set.to_dict())
            self._append_log(
                variation_id,
                LogKind.TAG_EDIT,
                {"old_tags": old.to_dict(), "new_tags": tag_set.to_dict()},
            )
        return variation

    # -- descriptions ----------------------------------------------------------

    def _check_bounds(self, variation, slot: ADSlot):
        video = self._video(variation.video_id)
        if slot.end_ms > video.duration_ms:
            raise OutOfBounds(
                f"slot end {slot.end_ms} exceeds video duration {video.duration_ms}"
            )

    def _refresh_warnings(self, variation_id):
        items = self.descriptions_for(variation_id)
        for i, d in enumerate(items):
            warnings = []
            if d.slot.length_ms > MAX_PLANNED_SLOT_MS:
                warnings.append("slot exceeds 15s cap")
            if i > 0 and items[i - 1].slot.end_ms > d.slot.start_ms:
                warnings.append("overlaps previous slot")
            if i + 1 < len(items) and d.slot.end_ms > items[i + 1].slot.start_ms:
                warnings.append("overlaps next slot")
            d.warnings = warnings

    def add_description(
        self,
        variation_id,
        slot: ADSlot,
        text,
        author_kind=AuthorKind.HUMAN,
        author_name="",
        guideline_rationale=None,
    ):
        with self._lock:
            variation = self._variation(variation_id)
            if not text or not text.strip():
                raise EmptyText("description text is empty")
            self._check_bounds(variation, slot)
            if any(
                d.slot.start_ms == slot.start_ms
                for d in self.descriptions_for(variation_id)
            ):
                raise OrderingViolation(
                    f"a description already starts at {slot.start_ms} ms"
                )
            desc = Description(
                id=self._new_id(),
                variation_id=variation_id,
                slot=slot,
                text=text,
                author_kind=AuthorKind(author_kind),
                author_name=author_name,
                created_at=self._now(),
                modified_at=self._now(),
                guideline_rationale=guideline_rationale,
            )
            self.descriptions[desc.id] = desc
            self._refresh_warnings(variation_id)
            self._append_log(
                variation_id,
                LogKind.ADD_DESCRIPTION,
                {
                    "description_id": desc.id,
                    "slot": slot.to_dict(),
                    "text": text,
                    "author_kind": desc.author_kind.value,
                    "author_name": author_name,
                    "guideline_rationale": guideline_rationale,
                },
            )
        return desc

    def delete_description(self, description_id):
        with self._lock:
            desc = self._description(description_id)
            del self.descriptions[description_id]
            self.proposals.pop(description_id, None)
            self._refresh_warnings(desc.variation_id)
            self._append_log(
                desc.variation_id,
                LogKind.DELETE_DESCRIPTION,
                {
                    "description_id": description_id,
                    "slot": desc.slot.to_dict(),
                    "text": desc.text,
                },
            )

    def edit_description_text(self, description_id, new_text, author_name=""):
        with self._lock:
            desc = self._description(description_id)
            if not new_text or not new_text.strip():
                raise EmptyText("description text is empty")
            old = desc.text
            desc.text = new_text
            desc.modified_at = self._now()
            self._append_log(
                desc.variation_id,
                LogKind.MANUAL_TEXT_EDIT,
                {
                    "description_id": description_id,
                    "old_text": old,
                    "new_text": new_text,
                    "author_name": author_name,
                },
            )
        return desc

    def adjust_slot(self, description_id, new_slot: ADSlot):
        with self._lock:
            desc = self._description(description_id)
            variation = self._variation(desc.variation_id)
            self._check_bounds(variation, new_slot)
            siblings = self.descriptions_for(desc.variation_id)
            idx = next(i for i, d in enumerate(siblings) if d.id == description_id)
            # the description keeps its position: strict start order must hold
            if idx > 0 and new_slot.start_ms <= siblings[idx - 1].slot.start_ms:
                raise OrderingViolation(
                    f"start {new_slot.start_ms} not after predecessor "
                    f"{siblings[idx - 1].slot.start_ms}"
                )
            if idx + 1 < len(siblings) and new_slot.start_ms >= siblings[idx + 1].slot.start_ms:
                raise OrderingViolation(
                    f"start {new_slot.start_ms} not before successor "
                    f"{siblings[idx + 1].slot.start_ms}"
                )
            old = desc.slot
            desc.slot = new_slot
            desc.modified_at = self._now()
            self._refresh_warnings(desc.variation_id)
            self._append_log(
                desc.variation_id,
                LogKind.SLOT_ADJUST,
                {
                    "description_id": description_id,
                    "old_slot": old.to_dict(),
                    "new_slot": new_slot.to_dict(),
                },
            )
        return desc

    # -- proposals -------------------------------------------------------------

    def register_proposals(self, variation_id, prompt, items, prompt_category=None):
        """Record a prompt event and its pending per-description proposals.

        `items` is a list of (description_id, proposed_text). Stored texts are
        not touched; each proposal awaits an explicit accept/reject decision.
        """
        with self._lock:
            self._variation(variation_id)
            for desc_id, _ in items:
                desc = self._description(desc_id)
                if desc.variation_id != variation_id:
                    raise UnknownDescription(
                        f"description {desc_id!r} is not in variation {variation_id!r}"
                    )
            entry = self._append_log(
                variation_id,
                LogKind.PROMPT_EVENT,
                {
                    "prompt": prompt,
                    "description_ids": [i for i, _ in items],
                    "proposals": {i: t for i, t in items},
                },
                prompt_category=prompt_category,
            )
            self.decision_counters[entry.id] = {"accepted": 0, "rejected": 0}
            now = self._now()
            for desc_id, text in items:
                self.proposals[desc_id] = {
                    "prompt_event_id": entry.id,
                    "variation_id": variation_id,
                    "text": text,
                    "created_at": now,
                }
        return entry

    def pending_proposal(self, description_id):
        p = self.proposals.get(description_id)
        if p and self._clock() - p["created_at"] <= PROPOSAL_TTL_SECONDS:
            return p
        return None

    def resolve_proposal(self, description_id, decision):
        decision = str(decision).upper()
        if decision not in ("ACCEPT", "REJECT"):
            raise ValueError(f"decision must be ACCEPT or REJECT, got {decision!r}")
        with self._lock:
            desc = self._description(description_id)
            p = self.proposals.get(description_id)
            if p is None or self._clock() - p["created_at"] > PROPOSAL_TTL_SECONDS:
                self.proposals.pop(description_id, None)
                raise NoPendingProposal(
                    f"no pending proposal for description {description_id!r}"
                )
            del self.proposals[description_id]
            old_text = desc.text
            if decision == "ACCEPT":
                desc.text = p["text"]
                desc.modified_at = self._now()
                self.decision_counters[p["prompt_event_id"]]["accepted"] += 1
            else:
                self.decision_counters[p["prompt_event_id"]]["rejected"] += 1
            self._append_log(
                desc.variation_id,
                LogKind.DECISION,
                {
                    "prompt_event_id": p["prompt_event_id"],
                    "description_id": description_id,
                    "decision": decision,
                    "old_text": old_text,
                    "proposed_text": p["text"],
                },
            )
        return desc

    # -- log replay --------------------------------------------------------------

    @staticmethod
    def _description_record(desc: Description) -> dict:
        return {
            "description_id": desc.id,
            "slot": desc.slot.to_dict(),
            "text": desc.text,
        }

    def replay(self, variation_id):
        """Rebuild (slot, text) state from the fork-time snapshot plus the log.

        Returns records sorted by start, comparable with descriptions_for().
        """
        self._variation(variation_id)
        state = {
            r["description_id"]: {"slot": dict(r["slot"]), "text": r["text"]}
            for r in self.snapshots.get(variation_id, [])
        }
        for entry in self.log_for(variation_id):
            p = entry.payload
            if entry.kind == LogKind.ADD_DESCRIPTION:
                state[p["description_id"]] = {"slot": dict(p["slot"]), "text": p["text"]}
            elif entry.kind == LogKind.DELETE_DESCRIPTION:
                state.pop(p["description_id"], None)
            elif entry.kind == LogKind.MANUAL_TEXT_EDIT:
                state[p["description_id"]]["text"] = p["new_text"]
            elif entry.kind == LogKind.SLOT_ADJUST:
                state[p["description_id"]]["slot"] = dict(p["new_slot"])
            elif entry.kind == LogKind.DECISION and p["decision"] == "ACCEPT":
                state[p["description_id"]]["text"] = p["proposed_text"]
        return sorted(
            (
                {"description_id": i, "slot": s["slot"], "text": s["text"]}
                for i, s in state.items()
            ),
            key=lambda r: r["slot"]["start_ms"],
        )
