"""Timing signals (silence, no-speech, scene cuts) and slot planning.

The planner works on 15-second analysis segments. Within each segment it
picks the highest non-empty priority level:

  L1  silence ∩ no-speech ∩ scene-cut windows
  L2  silence ∩ no-speech
  L3  no-speech
  L4  silence
  L5  scene-cut windows

All intervals at the winning level are kept, results are coalesced across
segment boundaries, and anything longer than the slot cap is recursively
split at its midpoint.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import cv2
import numpy as np

from . import intervals as iv
from .errors import EmptyAudio, ProviderFailure, TooFewFrames


class SignalKind(str, Enum):
    SILENCE = "SILENCE"
    NO_SPEECH = "NO_SPEECH"


class PriorityLevel(int, Enum):
    L1_ALL3 = 1
    L2_SIL_NOSPEECH = 2
    L3_NOSPEECH = 3
    L4_SILENCE = 4
    L5_SCENE = 5


@dataclass
class AudioTrack:
    samples: np.ndarray  # mono, normalized to [-1, 1]
    sample_rate: int

    @property
    def duration_ms(self) -> int:
        return len(self.samples) * 1000 // self.sample_rate


@dataclass
class SignalTrack:
    kind: SignalKind
    intervals: list  # sorted disjoint [start_ms, end_ms)


@dataclass
class SceneCutList:
    cut_times_ms: list


@dataclass
class TimingConfig:
    segment_len_ms: int = 15000
    max_slot_ms: int = 15000
    min_slot_ms: int = 1000
    silence_threshold_dbfs: float = -40.0
    silence_window_ms: int = 30
    silence_hop_ms: int = 10
    silence_min_ms: int = 300
    silence_merge_gap_ms: int = 100
    vad_energy_threshold_dbfs: float = -35.0
    vad_zcr_range: tuple = (0.02, 0.35)  # crossings per sample
    vad_frame_ms: int = 30
    scene_diff_threshold: float = 0.15
    scene_downsample: tuple = (32, 32)
    min_cut_gap_ms: int = 1000
    cut_window_ms: int = 2000


@dataclass
class PlannedSlot:
    start_ms: int
    end_ms: int
    level: PriorityLevel


@dataclass
class ADPlan:
    slots: list = field(default_factory=list)  # sorted disjoint PlannedSlots

    def spans(self):
        return [(s.start_ms, s.end_ms) for s in self.slots]


def _rms_dbfs(frame: np.ndarray) -> float:
    rms = math.sqrt(float(np.mean(np.square(frame, dtype=np.float64))))
    if rms <= 0.0:
        return -math.inf
    return 20.0 * math.log10(rms)


def detect_silence(audio: AudioTrack, config: TimingConfig = None) -> SignalTrack:
    """Windowed-RMS silence detector.

    A window is silent when its RMS level in dBFS falls below the threshold.
    Silent windows are unioned, near gaps bridged, and short islands dropped.
    """
    config = config or TimingConfig()
    if len(audio.samples) == 0:
        raise EmptyAudio("audio track has no samples")
    rate = audio.sample_rate
    duration_ms = audio.duration_ms
    win = max(1, rate * config.silence_window_ms // 1000)
    hop = max(1, rate * config.silence_hop_ms // 1000)
    spans = []
    for start in range(0, len(audio.samples), hop):
        frame = audio.samples[start : start + win]
        if len(frame) == 0:
            break
        if _rms_dbfs(frame) < config.silence_threshold_dbfs:
            s_ms = start * 1000 // rate
            e_ms = min(s_ms + config.silence_window_ms, duration_ms)
            if e_ms > s_ms:
                spans.append((s_ms, e_ms))
    merged = iv.merge_close(iv.normalize(spans), config.silence_merge_gap_ms)
    return SignalTrack(SignalKind.SILENCE, iv.drop_short(merged, config.silence_min_ms))


def _frame_is_speech(frame: np.ndarray, config: TimingConfig) -> bool:
    if _rms_dbfs(frame) < config.vad_energy_threshold_dbfs:
        return False
    if len(frame) < 2:
        return False
    signs = np.signbit(frame)
    zcr = float(np.count_nonzero(signs[1:] != signs[:-1])) / len(frame)
    lo, hi = config.vad_zcr_range
    return lo <= zcr <= hi


def detect_no_speech(audio: AudioTrack, config: TimingConfig = None, vad=None) -> SignalTrack:
    """No-speech detector: complement of detected speech intervals.

    The default heuristic classifies fixed frames by energy plus
    zero-crossing rate. `vad`, when given, is a callable
    ``(AudioTrack) -> [(start_ms, end_ms), ...]`` returning speech intervals.
    """
    config = config or TimingConfig()
    if len(audio.samples) == 0:
        raise EmptyAudio("audio track has no samples")
    duration_ms = audio.duration_ms
    if vad is not None:
        try:
            speech = iv.normalize(vad(audio))
        except Exception as exc:
            raise ProviderFailure(f"VAD provider failed: {exc}") from exc
    else:
        rate = audio.sample_rate
        step = max(1, rate * config.vad_frame_ms // 1000)
        spans = []
        for start in range(0, len(audio.samples), step):
            frame = audio.samples[start : start + step]
            if len(frame) == 0:
                break
            if _frame_is_speech(frame, config):
                s_ms = start * 1000 // rate
                e_ms = min(s_ms + config.vad_frame_ms, duration_ms)
                spans.append((s_ms, e_ms))
        speech = iv.normalize(spans)
    no_speech = iv.complement(speech, 0, duration_ms)
    merged = iv.merge_close(no_speech, config.silence_merge_gap_ms)
    return SignalTrack(SignalKind.NO_SPEECH, iv.drop_short(merged, config.silence_min_ms))


def _to_gray_small(frame: np.ndarray, size) -> np.ndarray:
    arr = np.asarray(frame)
    if arr.dtype == np.uint8:
        arr = arr.astype(np.float32) / 255.0
    else:
        arr = arr.astype(np.float32)
    if arr.ndim == 3:
        arr = 0.299 * arr[..., 0] + 0.587 * arr[..., 1] + 0.114 * arr[..., 2]
    h, w = size
    return cv2.resize(arr, (w, h), interpolation=cv2.INTER_AREA)


def detect_scene_changes(frames, config: TimingConfig = None) -> SceneCutList:
    """Cut detector over ``[(timestamp_ms, image_array), ...]``.

    A cut fires when the mean absolute difference between consecutive
    downsampled grayscale frames exceeds the threshold, subject to a
    minimum gap between consecutive cuts.
    """
    config = config or TimingConfig()
    if len(frames) < 2:
        raise TooFewFrames("scene detection needs at least 2 frames")
    cuts = []
    prev = _to_gray_small(frames[0][1], config.scene_downsample)
    for ts, image in frames[1:]:
        cur = _to_gray_small(image, config.scene_downsample)
        diff = float(np.mean(np.abs(cur - prev)))
        if diff > config.scene_diff_threshold:
            if not cuts or ts - cuts[-1] >= config.min_cut_gap_ms:
                cuts.append(int(ts))
        prev = cur
    return SceneCutList(cuts)


def split_long_interval(interval, max_slot_ms):
    return iv.split_long_interval(interval, max_slot_ms)


def plan_slots(
    silence: SignalTrack,
    no_speech: SignalTrack,
    cuts: SceneCutList,
    duration_ms: int,
    config: TimingConfig = None,
) -> ADPlan:
    """Plan AD slots over the whole timeline.

    Per segment the highest non-empty priority level contributes all of its
    intervals (clipped to the segment and filtered by the minimum length).
    Adjacent picks across segment boundaries are coalesced back together
    before the final midpoint splitting, so a long signal spanning several
    segments splits as one interval.
    """
    config = config or TimingConfig()
    if duration_ms <= 0:
        raise ValueError("duration_ms must be positive")
    sil = iv.clip(iv.normalize(silence.intervals), 0, duration_ms)
    nsp = iv.clip(iv.normalize(no_speech.intervals), 0, duration_ms)
    cut_windows = iv.normalize(
        [(t, min(t + config.cut_window_ms, duration_ms)) for t in cuts.cut_times_ms]
    )
    cut_windows = iv.clip(cut_windows, 0, duration_ms)

    sil_nsp = iv.intersect(sil, nsp)
    levels = [
        (PriorityLevel.L1_ALL3, iv.intersect(sil_nsp, cut_windows)),
        (PriorityLevel.L2_SIL_NOSPEECH, sil_nsp),
        (PriorityLevel.L3_NOSPEECH, nsp),
        (PriorityLevel.L4_SILENCE, sil),
        (PriorityLevel.L5_SCENE, cut_windows),
    ]

    picks = []  # (start, end, level) in timeline order
    seg_start = 0
    while seg_start < duration_ms:
        seg_end = min(seg_start + config.segment_len_ms, duration_ms)
        for level, track in levels:
            cand = iv.drop_short(iv.clip(track, seg_start, seg_end), config.min_slot_ms)
            if cand:
                picks.extend((s, e, level) for s, e in cand)
                break
        seg_start = seg_end

    # Coalesce overlapping/touching picks, keeping the best (lowest) level.
    coalesced = []
    for s, e, level in picks:
        if coalesced and s <= coalesced[-1][1]:
            ps, pe, plevel = coalesced[-1]
            coalesced[-1] = (ps, max(pe, e), min(plevel, level))
        else:
            coalesced.append((s, e, level))

    slots = []
    for s, e, level in coalesced:
        for ps, pe in iv.split_long_interval((s, e), config.max_slot_ms):
            slots.append(PlannedSlot(ps, pe, level))
    return ADPlan(slots)
