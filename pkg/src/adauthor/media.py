"""Media ingestion: WAV loading, frame manifests, external decoder hook."""

from __future__ import annotations

import shlex
import subprocess
import uuid
import wave
from pathlib import Path

import cv2
import numpy as np

from .errors import DecoderFailure, MissingMedia
from .model import VideoAsset
from .timing import AudioTrack

INGEST_FPS = 1  # frames per second extracted at ingestion


def read_wav(path) -> AudioTrack:
    """Read 16-bit mono little-endian WAV into a normalized AudioTrack."""
    try:
        with wave.open(str(path), "rb") as wav:
            channels = wav.getnchannels()
            width = wav.getsampwidth()
            rate = wav.getframerate()
            raw = wav.readframes(wav.getnframes())
    except (OSError, wave.Error) as exc:
        raise MissingMedia(f"cannot read WAV {path}: {exc}") from exc
    if width != 2:
        raise MissingMedia(f"{path}: expected 16-bit samples, got {8 * width}-bit")
    samples = np.frombuffer(raw, dtype="<i2").astype(np.float64) / 32768.0
    if channels > 1:
        samples = samples.reshape(-1, channels).mean(axis=1)
    return AudioTrack(samples=samples, sample_rate=rate)


def write_wav(path, track: AudioTrack) -> None:
    data = np.clip(track.samples, -1.0, 1.0)
    pcm = (data * 32767.0).astype("<i2")
    with wave.open(str(path), "wb") as wav:
        wav.setnchannels(1)
        wav.setsampwidth(2)
        wav.setframerate(track.sample_rate)
        wav.writeframes(pcm.tobytes())


def read_frame_manifest(path):
    """Parse `<ms> <filename>` lines into a sorted [(ms, filename)] list."""
    entries = []
    try:
        with open(path, "r", encoding="utf-8") as fp:
            for lineno, line in enumerate(fp, start=1):
                line = line.strip()
                if not line:
                    continue
                ms_text, _, filename = line.partition(" ")
                if not ms_text.isdigit() or not filename:
                    raise MissingMedia(
                        f"{path}:{lineno}: expected '<ms> <filename>', got {line!r}"
                    )
                entries.append((int(ms_text), filename))
    except OSError as exc:
        raise MissingMedia(f"cannot read frame manifest {path}: {exc}") from exc
    return sorted(entries)


def load_frames(manifest_path):
    """Load manifest frames as [(ms, image_array)] for scene detection."""
    base = Path(manifest_path).parent
    frames = []
    for ms, filename in read_frame_manifest(manifest_path):
        image = cv2.imread(str(base / filename), cv2.IMREAD_GRAYSCALE)
        if image is None:
            raise MissingMedia(f"cannot read frame image {base / filename}")
        frames.append((ms, image))
    return frames


def ingest_media(
    source_path,
    workdir,
    decoder_command=None,
    frames_manifest=None,
    title=None,
    frame_rate=30.0,
):
    """Register a video asset from pre-extracted media or an external decoder.

    With `decoder_command`, the template is run with {in}, {out_wav},
    {out_frames}, {fps} placeholders and must produce a 16-bit mono WAV plus
    a frame manifest `frames.txt` in the frames directory. Without it,
    `source_path` must already be that WAV (with an optional manifest).
    """
    source = Path(source_path)
    workdir = Path(workdir)
    if not source.exists():
        raise MissingMedia(f"source {source} does not exist")
    if decoder_command:
        workdir.mkdir(parents=True, exist_ok=True)
        out_wav = workdir / f"{source.stem}.wav"
        out_frames = workdir / f"{source.stem}_frames"
        out_frames.mkdir(exist_ok=True)
        command = decoder_command.format(
            **{
                "in": shlex.quote(str(source)),
                "out_wav": shlex.quote(str(out_wav)),
                "out_frames": shlex.quote(str(out_frames)),
                "fps": INGEST_FPS,
            }
        )
        proc = subprocess.run(
            command, shell=True, capture_output=True, text=True
        )
        if proc.returncode != 0:
            raise DecoderFailure(
                f"decoder exited {proc.returncode}",
                detail={"stdout": proc.stdout, "stderr": proc.stderr},
            )
        wav_path = out_wav
        manifest_path = out_frames / "frames.txt"
        if not wav_path.exists():
            raise DecoderFailure(f"decoder produced no WAV at {wav_path}")
        if not manifest_path.exists():
            manifest_path = None
    else:
        wav_path = source
        manifest_path = Path(frames_manifest) if frames_manifest else None
        if manifest_path and not manifest_path.exists():
            raise MissingMedia(f"frame manifest {manifest_path} does not exist")
    track = read_wav(wav_path)
    media_refs = {"wav": str(wav_path)}
    if manifest_path:
        read_frame_manifest(manifest_path)  # validate format up front
        media_refs["frames_manifest"] = str(manifest_path)
    return VideoAsset(
        id=uuid.uuid4().hex,
        title=title or source.stem,
        duration_ms=track.duration_ms,
        frame_rate=frame_rate,
        audio_sample_rate=track.sample_rate,
        media_refs=media_refs,
    )
