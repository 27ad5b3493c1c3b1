"""Set algebra over sorted disjoint half-open millisecond intervals.

All functions take and return lists of ``(start_ms, end_ms)`` tuples with
``start < end``, sorted and pairwise disjoint unless noted otherwise.
"""

from __future__ import annotations


def normalize(intervals):
    """Sort and merge overlapping or touching intervals, dropping empty ones."""
    spans = sorted((s, e) for s, e in intervals if e > s)
    out = []
    for s, e in spans:
        if out and s <= out[-1][1]:
            out[-1] = (out[-1][0], max(out[-1][1], e))
        else:
            out.append((s, e))
    return out


def intersect(a, b):
    """Intersection of two sorted disjoint interval lists."""
    out = []
    i = j = 0
    while i < len(a) and j < len(b):
        s = max(a[i][0], b[j][0])
        e = min(a[i][1], b[j][1])
        if s < e:
            out.append((s, e))
        if a[i][1] <= b[j][1]:
            i += 1
        else:
            j += 1
    return out


def complement(intervals, lo, hi):
    """Gaps of `intervals` within [lo, hi)."""
    out = []
    cursor = lo
    for s, e in intervals:
        s, e = max(s, lo), min(e, hi)
        if s >= e:
            continue
        if cursor < s:
            out.append((cursor, s))
        cursor = max(cursor, e)
    if cursor < hi:
        out.append((cursor, hi))
    return out


def clip(intervals, lo, hi):
    out = []
    for s, e in intervals:
        s, e = max(s, lo), min(e, hi)
        if s < e:
            out.append((s, e))
    return out


def merge_close(intervals, max_gap):
    """Bridge gaps strictly shorter than `max_gap` between consecutive intervals."""
    out = []
    for s, e in intervals:
        if out and s - out[-1][1] < max_gap:
            out[-1] = (out[-1][0], max(out[-1][1], e))
        else:
            out.append((s, e))
    return out


def drop_short(intervals, min_len):
    return [(s, e) for s, e in intervals if e - s >= min_len]


def split_long_interval(interval, max_len):
    """Recursively split at the integer (floor) midpoint until every piece fits.

    The concatenation of the output always equals the input interval.
    """
    s, e = interval
    if e <= s:
        raise ValueError(f"interval [{s}, {e}) has no length")
    if e - s <= max_len:
        return [(s, e)]
    mid = (s + e) // 2
    return split_long_interval((s, mid), max_len) + split_long_interval((mid, e), max_len)
