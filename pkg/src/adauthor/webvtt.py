"""WebVTT export/import of description tracks."""

from __future__ import annotations

import re

from .errors import MalformedWebVTT, OrderingViolation
from .model import ADSlot, AuthorKind

MAX_TIMESTAMP_MS = 359999999  # 99:59:59.999

_TS_RE = re.compile(r"^(\d{2,}):([0-5]\d):([0-5]\d)\.(\d{3})$")


def ms_to_timestamp(ms: int) -> str:
    if ms < 0 or ms > MAX_TIMESTAMP_MS:
        raise ValueError(f"timestamp out of range: {ms}")
    hours, rest = divmod(ms, 3600000)
    minutes, rest = divmod(rest, 60000)
    seconds, millis = divmod(rest, 1000)
    return f"{hours:02d}:{minutes:02d}:{seconds:02d}.{millis:03d}"


def timestamp_to_ms(text: str) -> int:
    m = _TS_RE.match(text.strip())
    if not m:
        raise MalformedWebVTT(f"bad timestamp {text!r}")
    hours, minutes, seconds, millis = (int(g) for g in m.groups())
    return ((hours * 60 + minutes) * 60 + seconds) * 1000 + millis


def export_webvtt(store, variation_id) -> str:
    """Render a variation's descriptions as a WebVTT track.

    Variation metadata travels in NOTE blocks; cues are ordered by start.
    """
    variation = store.get_variation(variation_id)
    lines = ["WEBVTT", ""]
    lines.append(f"NOTE variation: {variation.name}")
    lines.append(f"NOTE author: {variation.author_name}")
    lines.append(f"NOTE fork_count: {variation.fork_count}")
    tags = variation.tags
    if tags.predefined or tags.custom:
        rendered = "; ".join(kw for _, kw in tags.predefined)
        if tags.custom:
            rendered += (" | " if rendered else "") + "; ".join(tags.custom)
        lines.append(f"NOTE tags: {rendered}")
    lines.append("")
    for desc in store.descriptions_for(variation_id):
        lines.append(
            f"{ms_to_timestamp(desc.slot.start_ms)} --> {ms_to_timestamp(desc.slot.end_ms)}"
        )
        lines.append(desc.text)
        lines.append("")
    return "\n".join(lines)


def parse_webvtt(text: str):
    """Parse WebVTT into [(start_ms, end_ms, cue_text), ...].

    Raises MalformedWebVTT with a line reference on structural errors and
    OrderingViolation when cue starts are not strictly increasing.
    """
    lines = text.splitlines()
    if not lines or not lines[0].startswith("WEBVTT"):
        raise MalformedWebVTT("line 1: file must begin with WEBVTT")
    cues = []
    i = 1
    while i < len(lines):
        line = lines[i].strip()
        if not line:
            i += 1
            continue
        if line.startswith("NOTE"):
            # skip the whole comment block
            while i < len(lines) and lines[i].strip():
                i += 1
            continue
        timing_line = line
        timing_lineno = i + 1
        if "-->" not in timing_line:
            # optional cue identifier line before the timing line
            if i + 1 < len(lines) and "-->" in lines[i + 1]:
                i += 1
                timing_line = lines[i].strip()
                timing_lineno = i + 1
            else:
                raise MalformedWebVTT(
                    f"line {timing_lineno}: expected cue timing with '-->'"
                )
        left, arrow, right = timing_line.partition("-->")
        if not arrow:
            raise MalformedWebVTT(f"line {timing_lineno}: missing '-->'")
        # strip cue settings after the end timestamp
        right = right.strip().split(" ")[0]
        try:
            start_ms = timestamp_to_ms(left)
            end_ms = timestamp_to_ms(right)
        except MalformedWebVTT as exc:
            raise MalformedWebVTT(f"line {timing_lineno}: {exc.message}") from exc
        if end_ms <= start_ms:
            raise MalformedWebVTT(
                f"line {timing_lineno}: cue end {end_ms} not after start {start_ms}"
            )
        i += 1
        body = []
        while i < len(lines) and lines[i].strip():
            body.append(lines[i])
            i += 1
        if not body:
            raise MalformedWebVTT(f"line {timing_lineno}: cue has no text")
        if cues and start_ms <= cues[-1][0]:
            raise OrderingViolation(
                f"cue at {start_ms} ms does not start after the previous cue"
            )
        cues.append((start_ms, end_ms, "\n".join(body)))
    return cues


def import_webvtt(store, text, video_id, variation_name, author):
    """Create a variation whose descriptions mirror the given WebVTT cues."""
    cues = parse_webvtt(text)
    variation = store.create_variation(video_id, variation_name, author)
    for start_ms, end_ms, cue_text in cues:
        store.add_description(
            variation.id,
            ADSlot(start_ms, end_ms),
            cue_text,
            author_kind=AuthorKind.HUMAN,
            author_name=author,
        )
    return variation
