import numpy as np
import pytest

from adauthor import media
from adauthor.errors import DecoderFailure, MissingMedia
from adauthor.timing import AudioTrack


def write_tone_wav(path, duration_ms=30000, rate=16000):
    n = rate * duration_ms // 1000
    t = np.arange(n) / rate
    media.write_wav(path, AudioTrack(0.5 * np.sin(2 * np.pi * 440 * t), rate))


def test_wav_round_trip_and_duration(tmp_path):
    path = tmp_path / "clip.wav"
    write_tone_wav(path)  # 480000 samples at 16 kHz
    track = media.read_wav(path)
    assert track.sample_rate == 16000
    assert len(track.samples) == 480000
    assert track.duration_ms == 30000
    assert np.max(np.abs(track.samples)) <= 1.0


def test_read_wav_mixes_stereo_to_mono(tmp_path):
    import wave

    path = tmp_path / "stereo.wav"
    left = (np.ones(1000) * 16384).astype("<i2")
    right = np.zeros(1000, dtype="<i2")
    interleaved = np.empty(2000, dtype="<i2")
    interleaved[0::2] = left
    interleaved[1::2] = right
    with wave.open(str(path), "wb") as wav:
        wav.setnchannels(2)
        wav.setsampwidth(2)
        wav.setframerate(8000)
        wav.writeframes(interleaved.tobytes())
    track = media.read_wav(path)
    assert len(track.samples) == 1000
    assert track.samples[0] == pytest.approx(0.25, abs=1e-4)


def test_read_wav_rejects_8_bit(tmp_path):
    import wave

    path = tmp_path / "bad.wav"
    with wave.open(str(path), "wb") as wav:
        wav.setnchannels(1)
        wav.setsampwidth(1)
        wav.setframerate(8000)
        wav.writeframes(b"\x80" * 100)
    with pytest.raises(MissingMedia):
        media.read_wav(path)


def test_read_wav_missing_file(tmp_path):
    with pytest.raises(MissingMedia):
        media.read_wav(tmp_path / "nope.wav")


def test_manifest_parse_and_sort(tmp_path):
    manifest = tmp_path / "frames.txt"
    manifest.write_text("2000 b.png\n0 a.png\n\n4000 c.png\n")
    assert media.read_frame_manifest(manifest) == [
        (0, "a.png"),
        (2000, "b.png"),
        (4000, "c.png"),
    ]


def test_manifest_malformed_line(tmp_path):
    manifest = tmp_path / "frames.txt"
    manifest.write_text("0 a.png\nnot-a-number b.png\n")
    with pytest.raises(MissingMedia) as e:
        media.read_frame_manifest(manifest)
    assert ":2:" in str(e.value)


def test_load_frames_reads_images(tmp_path):
    import cv2

    for name, value in (("a.png", 0), ("b.png", 255)):
        cv2.imwrite(str(tmp_path / name), np.full((8, 8), value, dtype=np.uint8))
    (tmp_path / "frames.txt").write_text("0 a.png\n1000 b.png\n")
    frames = media.load_frames(tmp_path / "frames.txt")
    assert [ms for ms, _ in frames] == [0, 1000]
    assert frames[0][1].mean() == 0
    assert frames[1][1].mean() == 255


def test_ingest_plain_wav(tmp_path):
    path = tmp_path / "clip.wav"
    write_tone_wav(path, duration_ms=5000)
    asset = media.ingest_media(path, tmp_path / "work")
    assert asset.duration_ms == 5000
    assert asset.audio_sample_rate == 16000
    assert asset.title == "clip"
    assert asset.media_refs["wav"] == str(path)


def test_ingest_missing_source(tmp_path):
    with pytest.raises(MissingMedia):
        media.ingest_media(tmp_path / "absent.wav", tmp_path)


def test_ingest_decoder_success(tmp_path):
    source = tmp_path / "movie.bin"
    source.write_bytes(b"fake")
    donor = tmp_path / "donor.wav"
    write_tone_wav(donor, duration_ms=2000)
    command = "cp " + str(donor) + " {out_wav} && echo '0 f.png' > {out_frames}/frames.txt"
    asset = media.ingest_media(source, tmp_path / "work", decoder_command=command)
    assert asset.duration_ms == 2000
    assert asset.media_refs["frames_manifest"].endswith("frames.txt")


def test_ingest_decoder_failure_carries_output(tmp_path):
    source = tmp_path / "movie.bin"
    source.write_bytes(b"fake")
    with pytest.raises(DecoderFailure) as e:
        media.ingest_media(
            source, tmp_path / "work",
            decoder_command="echo oops-stdout && echo oops-stderr >&2 && false",
        )
    assert "oops-stdout" in e.value.detail["stdout"]
    assert "oops-stderr" in e.value.detail["stderr"]
