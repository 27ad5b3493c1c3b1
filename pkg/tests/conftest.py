"""Shared fixtures and independent oracles for the test suite."""

from __future__ import annotations

import itertools

import numpy as np
import pytest

from adauthor.model import VideoAsset
from adauthor.store import ProjectStore
from adauthor.timing import AudioTrack


def counter_clock(start=1_000_000.0, step=1.0):
    t = itertools.count()
    return lambda: start + step * next(t)


def sequential_ids(prefix="id"):
    n = itertools.count(1)
    return lambda: f"{prefix}{next(n):06d}"


def make_store() -> ProjectStore:
    """Store with deterministic ids and timestamps."""
    return ProjectStore(clock=counter_clock(), id_factory=sequential_ids())


def make_video(store, duration_ms=60000, video_id="vid1", **kwargs) -> VideoAsset:
    asset = VideoAsset(id=video_id, title="clip", duration_ms=duration_ms, **kwargs)
    store.add_video(asset)
    return asset


@pytest.fixture
def store():
    return make_store()


@pytest.fixture
def video(store):
    return make_video(store)


# ---- audio synthesis ---------------------------------------------------------

RATE = 8000


def tone(duration_ms, freq=440.0, amplitude=0.9, rate=RATE):
    n = rate * duration_ms // 1000
    t = np.arange(n) / rate
    return amplitude * np.sin(2 * np.pi * freq * t)


def silence_samples(duration_ms, rate=RATE):
    return np.zeros(rate * duration_ms // 1000)


def audio_from_spans(total_ms, loud_spans, freq=440.0, rate=RATE):
    """Silent PCM with `freq` tone over each [start_ms, end_ms) span."""
    samples = np.zeros(rate * total_ms // 1000)
    for start_ms, end_ms in loud_spans:
        s = rate * start_ms // 1000
        e = rate * end_ms // 1000
        t = np.arange(e - s) / rate
        samples[s:e] = 0.9 * np.sin(2 * np.pi * freq * t)
    return AudioTrack(samples=samples, sample_rate=rate)


# ---- interval oracles --------------------------------------------------------


def bitmap_from_intervals(intervals, horizon):
    bits = np.zeros(horizon, dtype=bool)
    for s, e in intervals:
        bits[max(0, s) : min(horizon, e)] = True
    return bits


def intervals_from_bitmap(bits):
    out = []
    start = None
    for i, b in enumerate(bits):
        if b and start is None:
            start = i
        elif not b and start is not None:
            out.append((start, i))
            start = None
    if start is not None:
        out.append((start, len(bits)))
    return out


def midpoint_split_oracle(interval, max_len):
    """Re-derivation of the midpoint split rule, independent of the library."""
    s, e = interval
    if e - s <= max_len:
        return [(s, e)]
    mid = (s + e) // 2
    return midpoint_split_oracle((s, mid), max_len) + midpoint_split_oracle(
        (mid, e), max_len
    )


def plan_oracle(silence, no_speech, cut_times, duration_ms, config):
    """Per-millisecond bitmap brute-force planner.

    Materializes all five priority levels per analysis segment, keeps the
    highest non-empty one, coalesces touching picks, then midpoint-splits.
    Returns [(start, end, level_number)].
    """
    sil = bitmap_from_intervals(silence, duration_ms)
    nsp = bitmap_from_intervals(no_speech, duration_ms)
    cw = bitmap_from_intervals(
        [(t, t + config.cut_window_ms) for t in cut_times], duration_ms
    )
    level_bits = [sil & nsp & cw, sil & nsp, nsp, sil, cw]
    picks = []
    seg = 0
    while seg < duration_ms:
        seg_end = min(seg + config.segment_len_ms, duration_ms)
        mask = np.zeros(duration_ms, dtype=bool)
        mask[seg:seg_end] = True
        for level, bits in enumerate(level_bits, start=1):
            runs = [
                (s, e)
                for s, e in intervals_from_bitmap(bits & mask)
                if e - s >= config.min_slot_ms
            ]
            if runs:
                picks.extend((s, e, level) for s, e in runs)
                break
        seg = seg_end
    coalesced = []
    for s, e, level in picks:
        if coalesced and s <= coalesced[-1][1]:
            ps, pe, plevel = coalesced[-1]
            coalesced[-1] = (ps, max(pe, e), min(plevel, level))
        else:
            coalesced.append((s, e, level))
    out = []
    for s, e, level in coalesced:
        out.extend((ps, pe, level) for ps, pe in midpoint_split_oracle((s, e), config.max_slot_ms))
    return out


# ---- text oracles ------------------------------------------------------------


def levenshtein_oracle(a, b):
    """Plain distance-only DP, no backtracking."""
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        cur = [i]
        for j, cb in enumerate(b, start=1):
            cur.append(min(prev[j - 1] + (ca != cb), prev[j] + 1, cur[j - 1] + 1))
        prev = cur
    return prev[len(b)]


def lcs_len_oracle(a, b):
    prev = [0] * (len(b) + 1)
    for ca in a:
        cur = [0]
        for j, cb in enumerate(b, start=1):
            cur.append(prev[j - 1] + 1 if ca == cb else max(prev[j], cur[j - 1]))
        prev = cur
    return prev[len(b)]
