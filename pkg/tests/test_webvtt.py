import random

import pytest

from adauthor import webvtt
from adauthor.errors import MalformedWebVTT, OrderingViolation
from adauthor.model import ADSlot, TagSet


# ---- timestamps -----------------------------------------------------------------


def test_ms_to_timestamp_examples():
    assert webvtt.ms_to_timestamp(0) == "00:00:00.000"
    assert webvtt.ms_to_timestamp(1000) == "00:00:01.000"
    assert webvtt.ms_to_timestamp(3500) == "00:00:03.500"
    assert webvtt.ms_to_timestamp(3661042) == "01:01:01.042"
    assert webvtt.ms_to_timestamp(359999999) == "99:59:59.999"


def test_timestamp_to_ms_examples():
    assert webvtt.timestamp_to_ms("00:00:00.000") == 0
    assert webvtt.timestamp_to_ms("01:01:01.042") == 3661042
    assert webvtt.timestamp_to_ms(" 00:00:03.500 ") == 3500


def test_timestamp_rejects_bad_fields():
    for bad in ("0:00:00.000", "00:60:00.000", "00:00:61.000", "00:00:00.1",
                "00-00-00.000", "garbage"):
        with pytest.raises(MalformedWebVTT):
            webvtt.timestamp_to_ms(bad)


def test_ms_to_timestamp_range():
    with pytest.raises(ValueError):
        webvtt.ms_to_timestamp(-1)
    with pytest.raises(ValueError):
        webvtt.ms_to_timestamp(360000000)


def test_timestamp_round_trip_random():
    rng = random.Random(31)
    for _ in range(2000):
        ms = rng.randint(0, webvtt.MAX_TIMESTAMP_MS)
        assert webvtt.timestamp_to_ms(webvtt.ms_to_timestamp(ms)) == ms


# ---- export -----------------------------------------------------------------------


def test_export_single_cue(store, video):
    v = store.create_variation(video.id, "V", "alice")
    store.add_description(v.id, ADSlot(1000, 3500), "A dog leaps.", author_name="alice")
    text = webvtt.export_webvtt(store, v.id)
    assert "00:00:01.000 --> 00:00:03.500\nA dog leaps.\n" in text
    assert text.startswith("WEBVTT\n")


def test_export_empty_variation_header_only(store, video):
    v = store.create_variation(video.id, "V", "alice")
    text = webvtt.export_webvtt(store, v.id)
    assert text.splitlines()[0] == "WEBVTT"
    assert "-->" not in text
    assert "NOTE variation: V" in text
    assert "NOTE author: alice" in text
    assert "NOTE fork_count: 0" in text


def test_export_golden_three_cues(store, video):
    v = store.create_variation(video.id, "Golden", "alice")
    store.set_tags(
        v.id,
        TagSet(predefined=[("Description Length", "Concise")], custom=["Upbeat"]),
    )
    for start, text in ((0, "Dawn over hills."), (5000, "A gate opens."),
                        (12000, "Sheep spill out.")):
        store.add_description(v.id, ADSlot(start, start + 2000), text,
                              author_name="alice")
    expected = (
        "WEBVTT\n"
        "\n"
        "NOTE variation: Golden\n"
        "NOTE author: alice\n"
        "NOTE fork_count: 0\n"
        "NOTE tags: Concise | Upbeat\n"
        "\n"
        "00:00:00.000 --> 00:00:02.000\n"
        "Dawn over hills.\n"
        "\n"
        "00:00:05.000 --> 00:00:07.000\n"
        "A gate opens.\n"
        "\n"
        "00:00:12.000 --> 00:00:14.000\n"
        "Sheep spill out.\n"
    )
    assert webvtt.export_webvtt(store, v.id) == expected


# ---- parse / import -----------------------------------------------------------------


def test_parse_skips_notes_and_cue_ids():
    text = (
        "WEBVTT\n\n"
        "NOTE a comment\nspanning two lines\n\n"
        "cue-1\n00:00:01.000 --> 00:00:02.000\nHello there.\n\n"
        "00:00:03.000 --> 00:00:04.000 align:start\nSecond cue\nwith two lines.\n"
    )
    assert webvtt.parse_webvtt(text) == [
        (1000, 2000, "Hello there."),
        (3000, 4000, "Second cue\nwith two lines."),
    ]


def test_parse_requires_webvtt_header():
    with pytest.raises(MalformedWebVTT) as e:
        webvtt.parse_webvtt("00:00:01.000 --> 00:00:02.000\nX\n")
    assert "line 1" in str(e.value)


def test_parse_missing_arrow_reports_line():
    text = "WEBVTT\n\n00:00:01.000 00:00:02.000\nX\n"
    with pytest.raises(MalformedWebVTT) as e:
        webvtt.parse_webvtt(text)
    assert "line 3" in str(e.value)


def test_parse_cue_without_text():
    text = "WEBVTT\n\n00:00:01.000 --> 00:00:02.000\n\n"
    with pytest.raises(MalformedWebVTT):
        webvtt.parse_webvtt(text)


def test_parse_end_not_after_start():
    text = "WEBVTT\n\n00:00:02.000 --> 00:00:02.000\nX\n"
    with pytest.raises(MalformedWebVTT):
        webvtt.parse_webvtt(text)


def test_parse_out_of_order_cues():
    text = (
        "WEBVTT\n\n"
        "00:00:05.000 --> 00:00:06.000\nA\n\n"
        "00:00:01.000 --> 00:00:02.000\nB\n"
    )
    with pytest.raises(OrderingViolation):
        webvtt.parse_webvtt(text)


def test_export_import_round_trip(store, video):
    v = store.create_variation(video.id, "orig", "alice")
    for start, body in ((500, "One."), (4000, "Two, with comma."),
                        (9000, "Three\nacross lines.")):
        store.add_description(v.id, ADSlot(start, start + 1500), body,
                              author_name="alice")
    text = webvtt.export_webvtt(store, v.id)
    imported = webvtt.import_webvtt(store, text, video.id, "copy", "bob")
    orig = [(d.slot.start_ms, d.slot.end_ms, d.text)
            for d in store.descriptions_for(v.id)]
    got = [(d.slot.start_ms, d.slot.end_ms, d.text)
           for d in store.descriptions_for(imported.id)]
    assert got == orig
    # and a re-export of the import parses to the same cues
    assert webvtt.parse_webvtt(webvtt.export_webvtt(store, imported.id)) == \
        webvtt.parse_webvtt(text)
