"""HTTP surfaces: the platform feed service and the review/annotation API.

Both are thin JSON adapters over in-process objects; field names are
exactly the canonical record schemas, so files and wire payloads stay
interchangeable.
"""

from __future__ import annotations

import re
from pathlib import Path

from fastapi import Body, FastAPI, HTTPException, Query, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import PlainTextResponse
from fastapi.staticfiles import StaticFiles

from .errors import (
    AuditError,
    InvariantViolation,
    ServiceUnreachable,
    SessionClosed,
    UnknownUser,
    UnknownVideoForUser,
)
from .model import (
    AdType,
    AgeGroup,
    AnnotationRecord,
    Engagement,
    ExposureRecord,
    Gender,
    Topic,
    UserProfile,
    annotation_to_dict,
    canonical_json,
    exposure_from_dict,
    exposure_to_dict,
    video_from_dict,
    video_to_dict,
)
from .runio import ANNOTATIONS_DIR, REPORT_DIR, load_classifications, load_run
from .sim import PlatformSim

_ANNOTATOR_RE = re.compile(r"^[A-Za-z0-9_-]{1,64}$")


def _http_error(exc: AuditError) -> HTTPException:
    if isinstance(exc, (UnknownUser, UnknownVideoForUser)):
        return HTTPException(status_code=404, detail=str(exc))
    if isinstance(exc, (SessionClosed, InvariantViolation)):
        return HTTPException(status_code=409, detail=str(exc))
    return HTTPException(status_code=422, detail=str(exc))


# ---------------------------------------------------------------------------
# Feed service
# ---------------------------------------------------------------------------


def create_feed_app(sim: PlatformSim) -> FastAPI:
    app = FastAPI(title="platform feed service")

    @app.post("/session/open")
    def open_session(payload: dict = Body(...)):
        try:
            profile = UserProfile(
                user_id=payload["user_id"],
                age=AgeGroup.from_age(int(payload["age"])),
                gender=Gender(payload["gender"]),
                interest=Topic(payload["interest"]),
                locale=payload["locale"],
            )
        except KeyError as exc:
            raise HTTPException(status_code=422, detail=f"missing field {exc.args[0]!r}")
        except (ValueError, AuditError) as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        try:
            index = sim.open_session(profile)
        except AuditError as exc:
            raise _http_error(exc)
        return {"session_index": index}

    @app.get("/feed/next")
    def feed_next(user: str = Query(...), truth: int = Query(0)):
        try:
            video = sim.next_feed_item(user)
        except AuditError as exc:
            raise _http_error(exc)
        if not truth:
            video = video.without_truth()
        return video_to_dict(video)

    @app.post("/engage")
    def engage(payload: dict = Body(...)):
        try:
            eng = payload["engagement"]
            engagement = Engagement(
                watched_full=bool(eng["watched_full"]),
                liked=bool(eng["liked"]),
                bookmarked=bool(eng["bookmarked"]),
                skipped=bool(eng["skipped"]),
            )
            user = payload["user"]
            video_id = payload["video_id"]
        except KeyError as exc:
            raise HTTPException(status_code=422, detail=f"missing field {exc.args[0]!r}")
        except InvariantViolation as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        try:
            sim.record_engagement(user, video_id, engagement)
        except AuditError as exc:
            raise _http_error(exc)
        return {"ok": True}

    @app.post("/session/close")
    def close_session(payload: dict = Body(...)):
        try:
            rows = sim.close_session(payload["user"])
        except KeyError as exc:
            raise HTTPException(status_code=422, detail=f"missing field {exc.args[0]!r}")
        except AuditError as exc:
            raise _http_error(exc)
        return {"records": [exposure_to_dict(r) for r in rows]}

    return app


class HttpFeedClient:
    """FeedService implementation over the wire.

    Any transport failure surfaces as ServiceUnreachable. The client asks
    for ground truth (the default in-process predictor needs it); wire
    classifiers must use the stripped view.
    """

    def __init__(self, base_url: str, client=None):
        import httpx

        self._own = client is None
        self._client = client or httpx.Client(base_url=base_url, timeout=30.0)
        self._httpx = httpx

    def close(self) -> None:
        if self._own:
            self._client.close()

    def _call(self, method: str, url: str, **kwargs):
        try:
            resp = self._client.request(method, url, **kwargs)
        except self._httpx.TransportError as exc:
            raise ServiceUnreachable(f"{method} {url}: {exc}") from exc
        if resp.status_code >= 400:
            detail = resp.json().get("detail", resp.text)
            if resp.status_code == 404:
                if "was not served" in detail:
                    raise UnknownVideoForUser(detail)
                raise UnknownUser(detail)
            if resp.status_code == 409:
                raise SessionClosed(detail)
            raise AuditError(detail)
        return resp.json()

    def open_session(self, profile: UserProfile) -> int:
        payload = {
            "user_id": profile.user_id,
            "age": profile.age.age_years,
            "gender": profile.gender.value,
            "interest": profile.interest.value,
            "locale": profile.locale,
        }
        return int(self._call("POST", "/session/open", json=payload)["session_index"])

    def next_feed_item(self, user_id: str):
        return video_from_dict(self._call("GET", f"/feed/next?user={user_id}&truth=1"))

    def record_engagement(self, user_id: str, video_id: str, engagement: Engagement) -> None:
        self._call(
            "POST",
            "/engage",
            json={
                "user": user_id,
                "video_id": video_id,
                "engagement": {
                    "watched_full": engagement.watched_full,
                    "liked": engagement.liked,
                    "bookmarked": engagement.bookmarked,
                    "skipped": engagement.skipped,
                },
            },
        )

    def close_session(self, user_id: str) -> list[ExposureRecord]:
        data = self._call("POST", "/session/close", json={"user": user_id})
        return [exposure_from_dict(d) for d in data["records"]]


# ---------------------------------------------------------------------------
# Review / annotation API
# ---------------------------------------------------------------------------


def create_review_app(run_dir: str | Path, static_dir: str | Path | None = None) -> FastAPI:
    """API over a classified run for browsing and manual annotation.

    Exposures and predicted labels are read-only; annotations are the only
    writes and land under run_dir/annotations/.
    """
    root = Path(run_dir)
    run = load_run(root)
    classifications = load_classifications(root)

    exposure_by_video: dict[str, ExposureRecord] = {}
    user_by_video: dict[str, str] = {}
    for user_id, rows in run.exposures.items():
        for row in rows:
            exposure_by_video.setdefault(row.video.video_id, row)
            user_by_video.setdefault(row.video.video_id, user_id)

    ann_dir = root / ANNOTATIONS_DIR
    annotations: dict[str, dict[str, AnnotationRecord]] = {}
    if ann_dir.is_dir():
        from .model import read_annotations

        for path in sorted(ann_dir.glob("ui_*.jsonl")):
            for rec in read_annotations(path):
                annotations.setdefault(rec.annotator_id, {})[rec.video_id] = rec

    app = FastAPI(title="audit review service")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )

    def _list_entry(video_id: str) -> dict:
        res = classifications[video_id]
        video = exposure_by_video[video_id].video
        return {
            "video_id": video_id,
            "user_id": user_by_video[video_id],
            "ad_type": res.ad_type.value,
            "ad_topic": res.ad_topic.value if res.ad_topic else None,
            "thumbnail": video.frames[0],
            "description": video.description,
        }

    @app.get("/api/videos")
    def list_videos(
        ad_type: str | None = None,
        ad_topic: str | None = None,
        user: str | None = None,
        page: int = Query(1, ge=1),
        page_size: int = Query(50, ge=1, le=200),
    ):
        try:
            want_type = AdType(ad_type) if ad_type else None
            want_topic = Topic(ad_topic) if ad_topic else None
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        ids = []
        for vid in sorted(classifications):
            if vid not in exposure_by_video:
                continue
            res = classifications[vid]
            if want_type and res.ad_type is not want_type:
                continue
            if want_topic and res.ad_topic is not want_topic:
                continue
            if user and user_by_video[vid] != user:
                continue
            ids.append(vid)
        total = len(ids)
        pages = max(1, -(-total // page_size))
        start = (page - 1) * page_size
        return {
            "items": [_list_entry(v) for v in ids[start : start + page_size]],
            "page": page,
            "pages": pages,
            "total": total,
        }

    @app.get("/api/videos/{video_id}")
    def video_detail(video_id: str):
        if video_id not in classifications or video_id not in exposure_by_video:
            raise HTTPException(status_code=404, detail=f"unknown video {video_id!r}")
        exposure = exposure_by_video[video_id]
        res = classifications[video_id]
        return {
            "video": video_to_dict(exposure.video.without_truth()),
            "user_id": user_by_video[video_id],
            "session_index": exposure.session_index,
            "position": exposure.position,
            "classification": {
                "is_ad": res.is_ad,
                "ad_type": res.ad_type.value,
                "ad_topic": res.ad_topic.value if res.ad_topic else None,
                "indicators_found": [k.value for k in res.indicators_found],
                "reasoning": res.reasoning,
            },
            "annotations": [
                annotation_to_dict(by_vid[video_id])
                for _aid, by_vid in sorted(annotations.items())
                if video_id in by_vid
            ],
        }

    @app.post("/api/annotations", status_code=201)
    def post_annotation(payload: dict = Body(...)):
        try:
            annotator = payload["annotator_id"]
            video_id = payload["video_id"]
            rec = AnnotationRecord(
                annotator_id=annotator,
                video_id=video_id,
                ad_type=AdType(payload["ad_type"]),
                ad_topic=Topic(payload["ad_topic"]) if payload.get("ad_topic") else None,
            )
        except KeyError as exc:
            raise HTTPException(status_code=422, detail=f"missing field {exc.args[0]!r}")
        except (ValueError, InvariantViolation) as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        if not _ANNOTATOR_RE.match(annotator):
            raise HTTPException(status_code=422, detail="annotator_id must match [A-Za-z0-9_-]{1,64}")
        if video_id not in classifications:
            raise HTTPException(status_code=404, detail=f"unknown video {video_id!r}")

        replaced = video_id in annotations.get(annotator, {})
        annotations.setdefault(annotator, {})[video_id] = rec
        ann_dir.mkdir(parents=True, exist_ok=True)
        with open(ann_dir / f"ui_{annotator}.jsonl", "a", encoding="utf-8", newline="\n") as fh:
            fh.write(canonical_json(annotation_to_dict(rec)) + "\n")
        return {"ok": True, "replaced": replaced}

    @app.get("/api/annotations/export")
    def export_annotations(annotator: str = Query(...)):
        by_vid = annotations.get(annotator)
        if not by_vid:
            raise HTTPException(status_code=404, detail=f"no annotations for {annotator!r}")
        lines = [canonical_json(annotation_to_dict(by_vid[v])) for v in sorted(by_vid)]
        return PlainTextResponse("\n".join(lines) + "\n", media_type="application/x-ndjson")

    @app.get("/api/metrics/summary")
    def metrics_summary():
        path = root / REPORT_DIR / "report.json"
        if not path.exists():
            raise HTTPException(status_code=404, detail="no report generated for this run yet")
        return Response(content=path.read_text(encoding="utf-8"), media_type="application/json")

    if static_dir is not None:
        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="ui")

    return app
