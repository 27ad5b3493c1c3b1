"""Closed tag vocabulary and TagSet validation/sanitization."""

from __future__ import annotations

from .errors import InvalidTagSet
from .model import TagSet

MAX_PREDEFINED = 4
MAX_CUSTOM = 2

# Eight categories, each with a closed keyword list.
TAG_CATEGORIES = {
    "Description Length": ("Concise", "Complete description"),
    "Focus": ("Main story focus", "Character focus", "Environment focus"),
    "Interpretations": ("With Interpretations", "Without Interpretations"),
    "Detail Level": ("Low detail", "Medium detail", "High detail"),
    "Action Description": ("Detailed action", "Brief action", "No action"),
    "Character Details": ("Character-driven", "Action-driven", "Environmental focus"),
    "Tagging of Key Visuals/Objects": (
        "Key visuals highlighted",
        "Important objects tagged",
        "Minimal object tagging",
    ),
    "Environmental Description": (
        "Detailed environment",
        "Basic environment",
        "Environment-free",
    ),
}

# Keywords are unique across categories, so a flat lookup is unambiguous.
KEYWORD_TO_CATEGORY = {
    kw: cat for cat, kws in TAG_CATEGORIES.items() for kw in kws
}


def validate_tag_set(tag_set: TagSet) -> None:
    """Raise InvalidTagSet unless the set obeys all vocabulary rules."""
    if len(tag_set.predefined) > MAX_PREDEFINED:
        raise InvalidTagSet(
            f"too many predefined keywords: {len(tag_set.predefined)} > {MAX_PREDEFINED}"
        )
    if len(tag_set.custom) > MAX_CUSTOM:
        raise InvalidTagSet(f"too many custom keywords: {len(tag_set.custom)} > {MAX_CUSTOM}")
    seen_categories = set()
    for category, keyword in tag_set.predefined:
        if category not in TAG_CATEGORIES:
            raise InvalidTagSet(f"unknown category: {category!r}")
        if keyword not in TAG_CATEGORIES[category]:
            raise InvalidTagSet(f"unknown keyword for {category!r}: {keyword!r}")
        if category in seen_categories:
            raise InvalidTagSet(f"duplicate category: {category!r}")
        seen_categories.add(category)


def sanitize_keywords(keywords, additional):
    """Build a valid TagSet from raw parsed keyword lists.

    Offending keywords (unknown, duplicate-category, excess) are dropped in
    list order; each drop is reported as a warning string.
    """
    predefined = []
    custom = []
    warnings = []
    used = set()
    for kw in keywords:
        category = KEYWORD_TO_CATEGORY.get(kw)
        if category is None:
            warnings.append(f"dropped unknown keyword: {kw!r}")
        elif category in used:
            warnings.append(f"dropped duplicate-category keyword: {kw!r}")
        elif len(predefined) >= MAX_PREDEFINED:
            warnings.append(f"dropped excess keyword: {kw!r}")
        else:
            predefined.append((category, kw))
            used.add(category)
    for kw in additional:
        if len(custom) >= MAX_CUSTOM:
            warnings.append(f"dropped excess custom keyword: {kw!r}")
        else:
            custom.append(kw)
    tag_set = TagSet(predefined=predefined, custom=custom)
    validate_tag_set(tag_set)
    return tag_set, warnings
