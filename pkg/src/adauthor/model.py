"""Domain types for the authoring engine."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from .errors import OutOfBounds

# Longest slot the planner will emit; longer manual slots are flagged.
MAX_PLANNED_SLOT_MS = 15000

# Closed set of labels a reviewer may attach to a prompt log entry.
# Labels are assigned manually, never inferred.
PROMPT_CATEGORIES = (
    "Simplify",
    "Shorten",
    "Remove",
    "Replace",
    "Addition",
    "Text on screen",
    "Correction",
    "Description Flow",
    "Language",
    "Reduce Detail",
    "Query",
    "Miscellaneous",
)


class AuthorKind(str, Enum):
    AI = "AI"
    HUMAN = "HUMAN"


class LogKind(str, Enum):
    PROMPT_EVENT = "PROMPT_EVENT"
    MANUAL_TEXT_EDIT = "MANUAL_TEXT_EDIT"
    SLOT_ADJUST = "SLOT_ADJUST"
    ADD_DESCRIPTION = "ADD_DESCRIPTION"
    DELETE_DESCRIPTION = "DELETE_DESCRIPTION"
    TAG_EDIT = "TAG_EDIT"
    DECISION = "DECISION"


@dataclass(frozen=True)
class ADSlot:
    """Closed time window [start_ms, end_ms) where a description may be voiced."""

    start_ms: int
    end_ms: int

    def __post_init__(self):
        if not (isinstance(self.start_ms, int) and isinstance(self.end_ms, int)):
            raise OutOfBounds("slot bounds must be integer milliseconds")
        if self.start_ms < 0 or self.start_ms >= self.end_ms:
            raise OutOfBounds(
                f"invalid slot [{self.start_ms}, {self.end_ms})"
            )

    @property
    def length_ms(self) -> int:
        return self.end_ms - self.start_ms

    def overlaps(self, other: "ADSlot") -> bool:
        return self.start_ms < other.end_ms and other.start_ms < self.end_ms

    def to_dict(self):
        return {"start_ms": self.start_ms, "end_ms": self.end_ms}

    @classmethod
    def from_dict(cls, d):
        return cls(start_ms=d["start_ms"], end_ms=d["end_ms"])


@dataclass
class VideoAsset:
    id: str
    title: str
    duration_ms: int
    frame_rate: float = 30.0
    audio_sample_rate: int = 16000
    media_refs: dict = field(default_factory=dict)  # keys: "wav", "frames_manifest"


@dataclass
class TagSet:
    predefined: list = field(default_factory=list)  # [(category, keyword), ...]
    custom: list = field(default_factory=list)

    def to_dict(self):
        return {
            "predefined": [[c, k] for c, k in self.predefined],
            "custom": list(self.custom),
        }

    @classmethod
    def from_dict(cls, d):
        return cls(
            predefined=[(c, k) for c, k in d.get("predefined", [])],
            custom=list(d.get("custom", [])),
        )


@dataclass
class Description:
    id: str
    variation_id: str
    slot: ADSlot
    text: str
    author_kind: AuthorKind
    author_name: str
    created_at: float
    modified_at: float
    guideline_rationale: Optional[str] = None
    warnings: list = field(default_factory=list)


@dataclass
class Variation:
    id: str
    video_id: str
    name: str
    author_name: str
    created_at: float
    parent_id: Optional[str] = None
    fork_count: int = 0
    tags: TagSet = field(default_factory=TagSet)
    custom_instructions: Optional[str] = None


@dataclass
class EditLogEntry:
    id: str
    variation_id: str
    kind: LogKind
    payload: dict
    at: float
    prompt_category: Optional[str] = None
