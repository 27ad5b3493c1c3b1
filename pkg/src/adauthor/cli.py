"""Batch command-line front-end.

Exit status: 0 success, 1 domain error (error code on stderr), 2 usage error.
"""

from __future__ import annotations

import json
import sys
from functools import wraps

import click

from . import generation, media, project_io, timing, webvtt
from .errors import DomainError
from .model import TagSet
from .provider import MockProvider, load_provider_config, make_provider
from .store import ProjectStore
from .textmetrics import levenshtein_breakdown, lexical_ratio


def domain_errors(fn):
    @wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except DomainError as exc:
            click.echo(f"{exc.code}: {exc.message}", err=True)
            sys.exit(1)

    return wrapper


@click.group()
@click.option("--project", "project_path", type=click.Path(), default="project.json")
@click.option("--config", "config_path", type=click.Path(exists=True), default=None,
              help="Providers config file (JSON).")
@click.option("--format", "output_format", type=click.Choice(["text", "structured"]),
              default="text")
@click.pass_context
def main(ctx, project_path, config_path, output_format):
    """Audio-description authoring toolkit."""
    ctx.obj = {
        "project_path": project_path,
        "config_path": config_path,
        "format": output_format,
    }


def _load_store(ctx) -> ProjectStore:
    return project_io.load_project(ctx.obj["project_path"])


def _save_store(ctx, store) -> None:
    project_io.save_project(store, ctx.obj["project_path"])


def _provider(ctx, mock: bool):
    if mock:
        return MockProvider()
    if ctx.obj["config_path"]:
        return make_provider(load_provider_config(ctx.obj["config_path"]))
    raise click.UsageError("no provider configured: pass --mock or --config")


def _emit(ctx, payload, text_renderer):
    if ctx.obj["format"] == "structured":
        click.echo(json.dumps(payload, indent=2, sort_keys=True))
    else:
        text_renderer(payload)


@main.command()
@click.option("--source", required=True, type=click.Path(exists=True))
@click.option("--workdir", type=click.Path(), default=".")
@click.option("--decoder", "decoder_command", default=None)
@click.option("--frames", "frames_manifest", type=click.Path(), default=None)
@click.option("--title", default=None)
@click.option("--init", is_flag=True, help="Create the project file if missing.")
@click.pass_context
@domain_errors
def ingest(ctx, source, workdir, decoder_command, frames_manifest, title, init):
    """Register media with the project, decoding it first if needed."""
    if init:
        store = ProjectStore()
    else:
        store = _load_store(ctx)
    asset = media.ingest_media(
        source, workdir, decoder_command=decoder_command,
        frames_manifest=frames_manifest, title=title,
    )
    store.add_video(asset)
    _save_store(ctx, store)
    _emit(ctx, {"video_id": asset.id, "duration_ms": asset.duration_ms},
          lambda p: click.echo(f"video {p['video_id']} ({p['duration_ms']} ms)"))


@main.command()
@click.option("--audio", required=True, type=click.Path(exists=True))
@click.option("--frames", "frames_manifest", type=click.Path(exists=True), default=None)
@click.option("--duration-ms", type=int, default=None)
@click.pass_context
@domain_errors
def plan(ctx, audio, frames_manifest, duration_ms):
    """Compute AD slots for a WAV (and optional frame manifest)."""
    config = timing.TimingConfig()
    track = media.read_wav(audio)
    duration = duration_ms or track.duration_ms
    silence = timing.detect_silence(track, config)
    no_speech = timing.detect_no_speech(track, config)
    if frames_manifest:
        frames = media.load_frames(frames_manifest)
        cuts = timing.detect_scene_changes(frames, config)
    else:
        cuts = timing.SceneCutList([])
    ad_plan = timing.plan_slots(silence, no_speech, cuts, duration, config)
    payload = {
        "duration_ms": duration,
        "slots": [
            {"start_ms": s.start_ms, "end_ms": s.end_ms, "level": s.level.name}
            for s in ad_plan.slots
        ],
    }

    def render(p):
        click.echo(f"{'start_ms':>10} {'end_ms':>10}  level")
        for s in p["slots"]:
            click.echo(f"{s['start_ms']:>10} {s['end_ms']:>10}  {s['level']}")

    _emit(ctx, payload, render)


@main.command()
@click.option("--variation", "variation_id", required=True)
@click.option("--mock", is_flag=True)
@click.option("--batch-size", type=int, default=generation.DEFAULT_BATCH_SIZE)
@click.pass_context
@domain_errors
def generate(ctx, variation_id, mock, batch_size):
    """Plan slots and generate initial AI descriptions for a variation."""
    store = _load_store(ctx)
    provider = _provider(ctx, mock)
    variation = store.get_variation(variation_id)
    video = store.get_video(variation.video_id)
    config = timing.TimingConfig()
    wav = video.media_refs.get("wav")
    if not wav:
        raise click.UsageError("video has no ingested audio to plan against")
    track = media.read_wav(wav)
    silence = timing.detect_silence(track, config)
    no_speech = timing.detect_no_speech(track, config)
    manifest_path = video.media_refs.get("frames_manifest")
    manifest = media.read_frame_manifest(manifest_path) if manifest_path else None
    if manifest_path:
        cuts = timing.detect_scene_changes(media.load_frames(manifest_path), config)
    else:
        cuts = timing.SceneCutList([])
    ad_plan = timing.plan_slots(silence, no_speech, cuts, video.duration_ms, config)
    descs = generation.generate_descriptions(
        store, variation_id, ad_plan, provider, batch_size=batch_size, manifest=manifest
    )
    _save_store(ctx, store)
    _emit(ctx, {"descriptions": [{"id": d.id, "start_ms": d.slot.start_ms,
                                  "text": d.text} for d in descs]},
          lambda p: [click.echo(f"{d['start_ms']:>10}  {d['text']}")
                     for d in p["descriptions"]])


@main.command()
@click.option("--variation", "variation_id", required=True)
@click.option("--description-id", "description_ids", multiple=True, required=True)
@click.option("--prompt", required=True)
@click.option("--mock", is_flag=True)
@click.pass_context
@domain_errors
def revise(ctx, variation_id, description_ids, prompt, mock):
    """Propose AI revisions for selected descriptions (pending accept/reject)."""
    store = _load_store(ctx)
    provider = _provider(ctx, mock)
    results = generation.revise_descriptions(
        store, variation_id, list(description_ids), prompt, provider
    )
    _save_store(ctx, store)
    payload = {
        "proposals": [
            {"description_id": r.description_id, "proposed_text": r.proposed_text,
             "error": r.error}
            for r in results
        ]
    }
    _emit(ctx, payload,
          lambda p: [click.echo(f"{r['description_id']}  {r['proposed_text'] or r['error']}")
                     for r in p["proposals"]])


@main.command()
@click.option("--variation", "variation_id", required=True)
@click.option("--author", default="cli")
@click.option("--name", default=None)
@click.pass_context
@domain_errors
def fork(ctx, variation_id, author, name):
    """Fork a variation into an editable copy."""
    store = _load_store(ctx)
    child = store.fork_variation(variation_id, author, name)
    _save_store(ctx, store)
    _emit(ctx, {"variation_id": child.id, "name": child.name},
          lambda p: click.echo(p["variation_id"]))


@main.command()
@click.option("--variation", "variation_id", required=True)
@click.option("--mock", is_flag=True)
@click.pass_context
@domain_errors
def tags(ctx, variation_id, mock):
    """Generate and store tags for a variation's descriptions."""
    store = _load_store(ctx)
    provider = _provider(ctx, mock)
    texts = [d.text for d in store.descriptions_for(variation_id)]
    if not texts:
        click.echo("EmptyText: variation has no descriptions to tag", err=True)
        sys.exit(1)
    tag_set, warnings = generation.generate_tags(texts, provider)
    store.set_tags(variation_id, tag_set)
    _save_store(ctx, store)
    _emit(ctx, {"tags": tag_set.to_dict(), "warnings": warnings},
          lambda p: click.echo(json.dumps(p["tags"])))


@main.command()
@click.option("--variation", "variation_id", required=True)
@click.option("-o", "--output", type=click.Path(), default=None)
@click.pass_context
@domain_errors
def export(ctx, variation_id, output):
    """Export a variation as WebVTT."""
    store = _load_store(ctx)
    text = webvtt.export_webvtt(store, variation_id)
    if output:
        with open(output, "w", encoding="utf-8") as fp:
            fp.write(text)
    else:
        click.echo(text, nl=False)


@main.command("import")
@click.argument("vtt_file", type=click.Path(exists=True))
@click.option("--video", "video_id", required=True)
@click.option("--name", required=True)
@click.option("--author", default="cli")
@click.pass_context
@domain_errors
def import_(ctx, vtt_file, video_id, name, author):
    """Import a WebVTT file as a new variation."""
    store = _load_store(ctx)
    with open(vtt_file, "r", encoding="utf-8") as fp:
        text = fp.read()
    variation = webvtt.import_webvtt(store, text, video_id, name, author)
    _save_store(ctx, store)
    _emit(ctx, {"variation_id": variation.id},
          lambda p: click.echo(p["variation_id"]))


@main.command()
@click.option("--variation", "variation_id", required=True)
@click.option("--against", required=True)
@click.pass_context
@domain_errors
def metrics(ctx, variation_id, against):
    """Per-slot lexical and edit-distance metrics between two variations."""
    store = _load_store(ctx)
    ours = {d.slot.start_ms: d for d in store.descriptions_for(variation_id)}
    theirs = {d.slot.start_ms: d for d in store.descriptions_for(against)}
    rows = []
    for start in sorted(set(ours) & set(theirs)):
        breakdown = levenshtein_breakdown(ours[start].text, theirs[start].text)
        rows.append({
            "slot_start_ms": start,
            "lexical_ratio": lexical_ratio(ours[start].text, theirs[start].text),
            "edit_distance": breakdown.to_dict(),
        })
    _emit(ctx, {"per_slot": rows},
          lambda p: [click.echo(
              f"{r['slot_start_ms']:>10}  ratio={r['lexical_ratio']:.3f} "
              f"dist={r['edit_distance']['distance']}") for r in p["per_slot"]])


@main.command()
@click.option("--bind", default="127.0.0.1:8787")
@click.pass_context
@domain_errors
def serve(ctx, bind):
    """Serve the HTTP API for the project."""
    from .service import start_server

    start_server(ctx.obj["project_path"], bind, ctx.obj["config_path"])


if __name__ == "__main__":
    main()
