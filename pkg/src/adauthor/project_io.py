"""Canonical single-file project persistence.

Serialization is a pure function of store state: fixed field order (sorted
keys), sorted collections, UTF-8 JSON. Loading validates every domain
invariant and rejects the file on the first violation.
"""

from __future__ import annotations

import json

from .errors import InvariantViolation, IoFailure, VersionUnsupported
from .model import (
    ADSlot,
    AuthorKind,
    Description,
    EditLogEntry,
    LogKind,
    TagSet,
    VideoAsset,
    Variation,
)
from .store import ProjectStore
from .vocabulary import validate_tag_set
from .errors import InvalidTagSet

FORMAT_VERSION = 1


def _store_to_dict(store: ProjectStore) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "videos": [
            {
                "id": v.id,
                "title": v.title,
                "duration_ms": v.duration_ms,
                "frame_rate": v.frame_rate,
                "audio_sample_rate": v.audio_sample_rate,
                "media_refs": dict(sorted(v.media_refs.items())),
            }
            for v in sorted(store.videos.values(), key=lambda v: v.id)
        ],
        "variations": [
            {
                "id": v.id,
                "video_id": v.video_id,
                "name": v.name,
                "author_name": v.author_name,
                "created_at": v.created_at,
                "parent_id": v.parent_id,
                "fork_count": v.fork_count,
                "tags": v.tags.to_dict(),
                "custom_instructions": v.custom_instructions,
            }
            for v in sorted(store.variations.values(), key=lambda v: v.id)
        ],
        "descriptions": [
            {
                "id": d.id,
                "variation_id": d.variation_id,
                "slot": d.slot.to_dict(),
                "text": d.text,
                "author_kind": d.author_kind.value,
                "author_name": d.author_name,
                "created_at": d.created_at,
                "modified_at": d.modified_at,
                "guideline_rationale": d.guideline_rationale,
                "warnings": list(d.warnings),
            }
            for d in sorted(
                store.descriptions.values(),
                key=lambda d: (d.variation_id, d.slot.start_ms, d.id),
            )
        ],
        "edit_log": [
            {
                "id": e.id,
                "variation_id": e.variation_id,
                "kind": e.kind.value,
                "payload": e.payload,
                "at": e.at,
                "prompt_category": e.prompt_category,
            }
            for e in store.edit_log
        ],
        "snapshots": {k: v for k, v in sorted(store.snapshots.items())},
        "proposals": {k: v for k, v in sorted(store.proposals.items())},
        "decision_counters": {
            k: v for k, v in sorted(store.decision_counters.items())
        },
    }


def dumps_project(store: ProjectStore) -> str:
    return json.dumps(_store_to_dict(store), ensure_ascii=False, sort_keys=True, indent=2) + "\n"


def save_project(store: ProjectStore, path) -> None:
    try:
        with open(path, "w", encoding="utf-8") as fp:
            fp.write(dumps_project(store))
    except OSError as exc:
        raise IoFailure(f"cannot write project file {path}: {exc}") from exc


def _validate(store: ProjectStore) -> None:
    for vid, variation in store.variations.items():
        path = f"variations[{vid}]"
        if variation.video_id not in store.videos:
            raise InvariantViolation(f"{path}.video_id: unknown video")
        children = sum(
            1 for w in store.variations.values() if w.parent_id == vid
        )
        if variation.fork_count != children:
            raise InvariantViolation(
                f"{path}.fork_count: {variation.fork_count} != child tally {children}"
            )
        if variation.parent_id is not None:
            parent = store.variations.get(variation.parent_id)
            if parent is None:
                raise InvariantViolation(f"{path}.parent_id: unknown parent")
            if not (parent.created_at < variation.created_at):
                raise InvariantViolation(f"{path}.created_at: not after parent")
        # lineage must terminate (acyclic)
        seen = set()
        cursor = variation
        while cursor.parent_id is not None:
            if cursor.id in seen:
                raise InvariantViolation(f"{path}: lineage cycle")
            seen.add(cursor.id)
            cursor = store.variations[cursor.parent_id]
        try:
            validate_tag_set(variation.tags)
        except InvalidTagSet as exc:
            raise InvariantViolation(f"{path}.tags: {exc.message}") from exc
    for vid in store.variations:
        items = store.descriptions_for(vid)
        duration = store.videos[store.variations[vid].video_id].duration_ms
        prev_start = -1
        for d in items:
            path = f"descriptions[{d.id}]"
            if not d.text.strip():
                raise InvariantViolation(f"{path}.text: empty")
            if d.slot.end_ms > duration:
                raise InvariantViolation(f"{path}.slot: beyond video duration")
            if d.slot.start_ms <= prev_start:
                raise InvariantViolation(f"{path}.slot: starts not strictly increasing")
            prev_start = d.slot.start_ms
    for d in store.descriptions.values():
        if d.variation_id not in store.variations:
            raise InvariantViolation(f"descriptions[{d.id}].variation_id: unknown")


def load_project(path) -> ProjectStore:
    try:
        with open(path, "r", encoding="utf-8") as fp:
            raw = json.load(fp)
    except OSError as exc:
        raise IoFailure(f"cannot read project file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise IoFailure(f"project file {path} is not valid JSON: {exc}") from exc
    version = raw.get("format_version")
    if version != FORMAT_VERSION:
        raise VersionUnsupported(f"format_version {version} unsupported (expected {FORMAT_VERSION})")
    store = ProjectStore()
    for v in raw.get("videos", []):
        store.videos[v["id"]] = VideoAsset(
            id=v["id"],
            title=v["title"],
            duration_ms=v["duration_ms"],
            frame_rate=v["frame_rate"],
            audio_sample_rate=v["audio_sample_rate"],
            media_refs=dict(v.get("media_refs", {})),
        )
    for v in raw.get("variations", []):
        store.variations[v["id"]] = Variation(
            id=v["id"],
            video_id=v["video_id"],
            name=v["name"],
            author_name=v["author_name"],
            created_at=v["created_at"],
            parent_id=v.get("parent_id"),
            fork_count=v.get("fork_count", 0),
            tags=TagSet.from_dict(v.get("tags", {})),
            custom_instructions=v.get("custom_instructions"),
        )
    for d in raw.get("descriptions", []):
        store.descriptions[d["id"]] = Description(
            id=d["id"],
            variation_id=d["variation_id"],
            slot=ADSlot.from_dict(d["slot"]),
            text=d["text"],
            author_kind=AuthorKind(d["author_kind"]),
            author_name=d["author_name"],
            created_at=d["created_at"],
            modified_at=d["modified_at"],
            guideline_rationale=d.get("guideline_rationale"),
            warnings=list(d.get("warnings", [])),
        )
    for e in raw.get("edit_log", []):
        store.edit_log.append(
            EditLogEntry(
                id=e["id"],
                variation_id=e["variation_id"],
                kind=LogKind(e["kind"]),
                payload=e["payload"],
                at=e["at"],
                prompt_category=e.get("prompt_category"),
            )
        )
    store.snapshots = dict(raw.get("snapshots", {}))
    store.proposals = dict(raw.get("proposals", {}))
    store.decision_counters = dict(raw.get("decision_counters", {}))
    _validate(store)
    return store
