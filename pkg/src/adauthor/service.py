"""HTTP facade over the authoring engine.

Thin adapter: every endpoint delegates to the corresponding library
operation. Mutations funnel through the store's single writer; long-running
work (ingest, generation) runs as polled jobs.
"""

from __future__ import annotations

import threading
import uuid
from collections import defaultdict
from contextlib import asynccontextmanager
from typing import Optional

from fastapi import FastAPI, Query, Request
from fastapi.responses import JSONResponse, PlainTextResponse
from pydantic import BaseModel

from . import generation, media, project_io, timing, webvtt
from .errors import DomainError, EmptyText
from .model import ADSlot, TagSet
from .provider import MockProvider, ModelProvider
from .store import ProjectStore
from .textmetrics import levenshtein_breakdown, lexical_ratio, word_diff

ERROR_STATUS = {
    "UnknownVideo": 404,
    "UnknownVariation": 404,
    "UnknownDescription": 404,
    "DuplicateName": 409,
    "OrderingViolation": 409,
    "NoPendingProposal": 409,
    "VariationHasChildren": 409,
    "EmptyText": 422,
    "InvalidTagSet": 422,
    "OutOfBounds": 422,
    "EmptyPrompt": 422,
    "MalformedWebVTT": 422,
    "MissingMedia": 422,
    "EmptyAudio": 422,
    "TooFewFrames": 422,
    "DimensionMismatch": 422,
    "ZeroVector": 422,
    "VersionUnsupported": 400,
    "InvariantViolation": 400,
    "UnparseableResponse": 502,
    "ProviderFailure": 502,
    "IoFailure": 500,
    "DecoderFailure": 500,
}


class JobManager:
    def __init__(self):
        self._jobs = {}
        self._lock = threading.Lock()

    def submit(self, fn):
        job_id = uuid.uuid4().hex
        with self._lock:
            self._jobs[job_id] = {
                "id": job_id,
                "state": "queued",
                "progress": 0.0,
                "result": None,
                "error": None,
            }

        def run():
            self.update(job_id, state="running")
            try:
                result = fn(lambda p: self.update(job_id, progress=p))
                self.update(job_id, state="done", progress=1.0, result=result)
            except Exception as exc:
                self.update(job_id, state="failed", error=str(exc))

        threading.Thread(target=run, daemon=True).start()
        return job_id

    def update(self, job_id, **fields):
        with self._lock:
            self._jobs[job_id].update(fields)

    def get(self, job_id):
        with self._lock:
            return dict(self._jobs[job_id]) if job_id in self._jobs else None


# ---- request bodies ----------------------------------------------------------


class IngestBody(BaseModel):
    source_path: str
    title: Optional[str] = None
    decoder_command: Optional[str] = None
    frames_manifest: Optional[str] = None


class CreateVariationBody(BaseModel):
    name: str
    author_name: str
    custom_instructions: Optional[str] = None
    auto_generate: bool = False


class ForkBody(BaseModel):
    author_name: str
    name: Optional[str] = None


class TagsBody(BaseModel):
    predefined: list = []
    custom: list = []


class AddDescriptionBody(BaseModel):
    slot: dict
    text: str
    author_name: str = ""


class PatchDescriptionBody(BaseModel):
    text: Optional[str] = None
    slot: Optional[dict] = None
    author_name: str = ""


class ReviseBody(BaseModel):
    prompt: str
    description_ids: list
    prompt_category: Optional[str] = None


class ResolveBody(BaseModel):
    decision: str


# ---- serializers -------------------------------------------------------------


def _video_json(v):
    return {
        "id": v.id,
        "title": v.title,
        "duration_ms": v.duration_ms,
        "frame_rate": v.frame_rate,
        "audio_sample_rate": v.audio_sample_rate,
        "media_refs": v.media_refs,
    }


def _variation_json(v):
    return {
        "id": v.id,
        "video_id": v.video_id,
        "name": v.name,
        "author_name": v.author_name,
        "parent_id": v.parent_id,
        "fork_count": v.fork_count,
        "tags": v.tags.to_dict(),
        "custom_instructions": v.custom_instructions,
        "created_at": v.created_at,
    }


def _description_json(d):
    return {
        "id": d.id,
        "variation_id": d.variation_id,
        "slot": d.slot.to_dict(),
        "text": d.text,
        "author_kind": d.author_kind.value,
        "author_name": d.author_name,
        "created_at": d.created_at,
        "modified_at": d.modified_at,
        "guideline_rationale": d.guideline_rationale,
        "warnings": d.warnings,
    }


def create_app(
    store: ProjectStore,
    provider: ModelProvider = None,
    project_path=None,
    timing_config: timing.TimingConfig = None,
) -> FastAPI:
    provider = provider or MockProvider()
    timing_config = timing_config or timing.TimingConfig()
    jobs = JobManager()
    generation_locks = defaultdict(threading.Lock)

    @asynccontextmanager
    async def lifespan(app):
        yield
        if project_path:
            project_io.save_project(store, project_path)

    app = FastAPI(title="adauthor", lifespan=lifespan)

    @app.exception_handler(DomainError)
    async def on_domain_error(request: Request, exc: DomainError):
        status = ERROR_STATUS.get(exc.code, 400)
        return JSONResponse(
            status_code=status,
            content={
                "error": {
                    "status": status,
                    "code": exc.code,
                    "message": exc.message,
                    "detail": exc.detail,
                }
            },
        )

    def _plan_for_video(video):
        wav = video.media_refs.get("wav")
        if not wav:
            return timing.ADPlan([])
        audio = media.read_wav(wav)
        silence = timing.detect_silence(audio, timing_config)
        no_speech = timing.detect_no_speech(audio, timing_config)
        manifest_path = video.media_refs.get("frames_manifest")
        if manifest_path:
            frames = media.load_frames(manifest_path)
            cuts = (
                timing.detect_scene_changes(frames, timing_config)
                if len(frames) >= 2
                else timing.SceneCutList([])
            )
        else:
            cuts = timing.SceneCutList([])
        return timing.plan_slots(
            silence, no_speech, cuts, video.duration_ms, timing_config
        )

    def _manifest_for_video(video):
        path = video.media_refs.get("frames_manifest")
        return media.read_frame_manifest(path) if path else None

    # ---- videos ----

    @app.post("/videos", status_code=202)
    def ingest_video(body: IngestBody):
        def work(progress):
            asset = media.ingest_media(
                body.source_path,
                workdir=".",
                decoder_command=body.decoder_command,
                frames_manifest=body.frames_manifest,
                title=body.title,
            )
            store.add_video(asset)
            return {"video_id": asset.id}

        return {"job_id": jobs.submit(work)}

    @app.get("/videos")
    def list_videos():
        return [_video_json(v) for v in sorted(store.videos.values(), key=lambda v: v.id)]

    @app.get("/videos/{video_id}")
    def get_video(video_id: str):
        return _video_json(store.get_video(video_id))

    # ---- variations ----

    @app.post("/videos/{video_id}/variations", status_code=201)
    def create_variation(video_id: str, body: CreateVariationBody):
        variation = store.create_variation(
            video_id, body.name, body.author_name, body.custom_instructions
        )
        payload = {"variation": _variation_json(variation)}
        if body.auto_generate:
            video = store.get_video(video_id)

            def work(progress):
                with generation_locks[variation.id]:
                    plan = _plan_for_video(video)
                    progress(0.5)
                    descs = generation.generate_descriptions(
                        store,
                        variation.id,
                        plan,
                        provider,
                        manifest=_manifest_for_video(video),
                    )
                return {"description_count": len(descs)}

            payload["job_id"] = jobs.submit(work)
        return payload

    @app.get("/videos/{video_id}/variations")
    def list_variations(video_id: str):
        store.get_video(video_id)
        return [
            _variation_json(v)
            for v in sorted(store.variations.values(), key=lambda v: v.created_at)
            if v.video_id == video_id
        ]

    @app.post("/variations/{variation_id}/fork", status_code=201)
    def fork_variation(variation_id: str, body: ForkBody):
        child = store.fork_variation(variation_id, body.author_name, body.name)
        return _variation_json(child)

    @app.get("/variations/{variation_id}")
    def get_variation(variation_id: str):
        variation = store.get_variation(variation_id)
        out = _variation_json(variation)
        out["descriptions"] = [
            _description_json(d) for d in store.descriptions_for(variation_id)
        ]
        return out

    @app.delete("/variations/{variation_id}", status_code=204)
    def delete_variation(variation_id: str):
        store.delete_variation(variation_id)

    @app.put("/variations/{variation_id}/tags")
    def set_tags(variation_id: str, body: TagsBody):
        tag_set = TagSet(
            predefined=[(c, k) for c, k in body.predefined], custom=list(body.custom)
        )
        return _variation_json(store.set_tags(variation_id, tag_set))

    @app.post("/variations/{variation_id}/tags/generate")
    def generate_variation_tags(variation_id: str):
        texts = [d.text for d in store.descriptions_for(variation_id)]
        if not texts:
            raise EmptyText("variation has no descriptions to tag")
        tag_set, warnings = generation.generate_tags(texts, provider)
        variation = store.set_tags(variation_id, tag_set)
        out = _variation_json(variation)
        out["warnings"] = warnings
        return out

    # ---- descriptions ----

    @app.post("/variations/{variation_id}/descriptions", status_code=201)
    def add_description(variation_id: str, body: AddDescriptionBody):
        desc = store.add_description(
            variation_id,
            ADSlot.from_dict(body.slot),
            body.text,
            author_name=body.author_name,
        )
        return _description_json(desc)

    @app.patch("/descriptions/{description_id}")
    def patch_description(description_id: str, body: PatchDescriptionBody):
        if body.text is None and body.slot is None:
            raise EmptyText("nothing to change: provide text or slot")
        desc = store.get_description(description_id)
        if body.text is not None:
            desc = store.edit_description_text(
                description_id, body.text, body.author_name
            )
        if body.slot is not None:
            desc = store.adjust_slot(description_id, ADSlot.from_dict(body.slot))
        return _description_json(desc)

    @app.delete("/descriptions/{description_id}", status_code=204)
    def delete_description(description_id: str):
        store.delete_description(description_id)

    @app.post("/variations/{variation_id}/revise")
    def revise(variation_id: str, body: ReviseBody):
        video = store.get_video(store.get_variation(variation_id).video_id)
        results = generation.revise_descriptions(
            store,
            variation_id,
            body.description_ids,
            body.prompt,
            provider,
            manifest=_manifest_for_video(video),
            prompt_category=body.prompt_category,
        )
        proposals = []
        for r in results:
            item = {
                "description_id": r.description_id,
                "proposed_text": r.proposed_text,
                "error": r.error,
            }
            if r.proposed_text is not None:
                old = store.get_description(r.description_id).text
                item["diff"] = [
                    op.to_dict() for op in word_diff(old, r.proposed_text).ops
                ]
            proposals.append(item)
        return {"proposals": proposals}

    @app.post("/descriptions/{description_id}/resolve")
    def resolve(description_id: str, body: ResolveBody):
        desc = store.resolve_proposal(description_id, body.decision)
        return _description_json(desc)

    # ---- interchange ----

    @app.get("/variations/{variation_id}/export.vtt")
    def export_vtt(variation_id: str):
        return PlainTextResponse(
            webvtt.export_webvtt(store, variation_id), media_type="text/vtt"
        )

    @app.post("/videos/{video_id}/import.vtt", status_code=201)
    async def import_vtt(
        video_id: str,
        request: Request,
        name: str = Query(...),
        author: str = Query(...),
    ):
        text = (await request.body()).decode("utf-8")
        variation = webvtt.import_webvtt(store, text, video_id, name, author)
        return _variation_json(variation)

    # ---- metrics ----

    @app.get("/variations/{variation_id}/metrics")
    def metrics(variation_id: str, against: str = Query(...)):
        ours = {d.slot.start_ms: d for d in store.descriptions_for(variation_id)}
        theirs = {d.slot.start_ms: d for d in store.descriptions_for(against)}
        aligned = []
        for start in sorted(set(ours) & set(theirs)):
            a, b = ours[start], theirs[start]
            aligned.append(
                {
                    "slot_start_ms": start,
                    "lexical_ratio": lexical_ratio(a.text, b.text),
                    "edit_distance": levenshtein_breakdown(a.text, b.text).to_dict(),
                    "semantic_cosine": None,
                    "stylistic_cosine": None,
                }
            )
        return {"variation_id": variation_id, "against": against, "per_slot": aligned}

    # ---- jobs ----

    @app.get("/jobs/{job_id}")
    def get_job(job_id: str):
        job = jobs.get(job_id)
        if job is None:
            return JSONResponse(
                status_code=404,
                content={
                    "error": {
                        "status": 404,
                        "code": "UnknownJob",
                        "message": f"no job {job_id!r}",
                        "detail": None,
                    }
                },
            )
        return job

    return app


def start_server(project_path, bind_address="127.0.0.1:8787", providers_config=None):
    """Load a project and serve it until interrupted; flushes on shutdown."""
    import uvicorn

    from .provider import load_provider_config, make_provider

    store = project_io.load_project(project_path)
    provider = (
        make_provider(load_provider_config(providers_config))
        if providers_config
        else MockProvider()
    )
    app = create_app(store, provider=provider, project_path=project_path)
    host, _, port = bind_address.partition(":")
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port or 8787), log_level="warning")
