"""Audio-description authoring engine.

Slot planning from silence/no-speech/scene signals, AI-assisted drafting and
revision with human accept/reject, fork-based variations with tags, WebVTT
interchange, and an HTTP service plus CLI on top.
"""

from .model import ADSlot, AuthorKind, Description, TagSet, Variation, VideoAsset
from .store import ProjectStore

__all__ = [
    "ADSlot",
    "AuthorKind",
    "Description",
    "TagSet",
    "Variation",
    "VideoAsset",
    "ProjectStore",
]

__version__ = "0.1.0"
