"""HTTP/1.1 JSON API over :class:`ServiceCore`.

Mutating routes need ``Authorization: Bearer <token>``. Errors map to 400
(validation), 401 (auth), 404 (unknown id), 409 (conflict) and 503
(engine or scorer unavailable).
"""

from __future__ import annotations

import hmac

from fastapi import BackgroundTasks, Body, Depends, FastAPI, Header, HTTPException, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse

from wxtrans.errors import (
    ConfigurationError,
    ConflictError,
    EngineUnavailable,
    InvalidArgument,
    NonRepresentableError,
    NotFoundError,
    ScorerUnavailable,
)
from wxtrans.service.asciisafe import ascii_safe
from wxtrans.service.core import ServiceCore, ServiceSettings
from wxtrans.service.feedback import FeedbackEvent

_STATUS = [
    (NotFoundError, 404),
    (ConflictError, 409),
    ((EngineUnavailable, ScorerUnavailable), 503),
    ((InvalidArgument, NonRepresentableError, ConfigurationError), 400),
]


def create_app(core: ServiceCore, token: str | None) -> FastAPI:
    """Build the app. ``token=None`` disables mutating routes entirely."""
    app = FastAPI(title="wxtrans", version="1")
    app.state.core = core

    def require_token(authorization: str | None = Header(default=None)) -> None:
        if token is None:
            raise HTTPException(401, "mutating routes are disabled: no service token configured")
        scheme, _, given = (authorization or "").partition(" ")
        if scheme.lower() != "bearer" or not hmac.compare_digest(given.encode(), token.encode()):
            raise HTTPException(401, "missing or invalid bearer token")

    for exc_types, code in _STATUS:
        def handler(_: Request, exc: Exception, code=code) -> JSONResponse:
            return JSONResponse({"detail": str(exc), "error": type(exc).__name__}, status_code=code)
        for t in exc_types if isinstance(exc_types, tuple) else (exc_types,):
            app.add_exception_handler(t, handler)

    @app.exception_handler(RequestValidationError)
    def bad_request(_: Request, exc: RequestValidationError) -> JSONResponse:
        return JSONResponse({"detail": exc.errors(), "error": "ValidationError"}, status_code=400)

    @app.get("/v1/health")
    def health() -> dict:
        return {"status": "ok", "engine": core.engine_id, "reverse_engine": core.reverse_id}

    @app.post("/v1/jobs", status_code=202, dependencies=[Depends(require_token)])
    def submit_job(background: BackgroundTasks, payload: dict = Body(...)) -> dict:
        job_id = core.submit_job(payload)
        background.add_task(core.run_job, job_id)
        return {"job_id": job_id, "status": "queued"}

    @app.get("/v1/jobs/{job_id}")
    def get_job(job_id: str) -> dict:
        return core.get_job(job_id)

    @app.get("/v1/reportcard")
    def get_report_card(type: str | None = None, lang: str | None = None,
                        since: str | None = None, until: str | None = None) -> dict:
        return core.report_card(type, lang, since, until).to_dict()

    @app.post("/v1/feedback", dependencies=[Depends(require_token)])
    def post_feedback(payload: dict = Body(...)) -> dict:
        return core.feedback.ingest(FeedbackEvent.from_dict(payload)).to_dict()

    @app.get("/v1/feedback/tally")
    def get_tally(file_name: str, language: str) -> dict:
        return {"file_name": file_name, "language": language.lower(), **core.feedback.tally(file_name, language)}

    @app.get("/v1/review/next")
    def next_review() -> dict:
        item = core.feedback.next_review()
        return {"item": None if item is None else item.to_dict()}

    @app.get("/v1/review/{item_id}")
    def get_review(item_id: str) -> dict:
        return core.feedback.get_item(item_id).to_dict()

    @app.post("/v1/review/{item_id}", dependencies=[Depends(require_token)])
    def resolve_review(item_id: str, payload: dict = Body(...)) -> dict:
        unknown = set(payload) - {"state", "note"}
        if unknown or "state" not in payload:
            raise InvalidArgument("review update needs 'state' and optionally 'note'")
        return core.feedback.resolve(item_id, payload["state"], str(payload.get("note", ""))).to_dict()

    @app.post("/v1/lep/import", dependencies=[Depends(require_token)])
    def import_lep(payload: dict = Body(...)) -> dict:
        unknown = set(payload) - {"county_csv", "overlaps_csv", "tract_csv", "areas"}
        if unknown or not {"county_csv", "overlaps_csv"} <= set(payload):
            raise InvalidArgument("LEP import needs county_csv and overlaps_csv; tract_csv and areas are optional")
        return core.import_lep(payload["county_csv"], payload["overlaps_csv"], payload.get("tract_csv"),
                               payload.get("areas"))

    @app.get("/v1/lep/priority")
    def lep_priority(ratio: float = 0.35, min_lep: int = 200_000) -> dict:
        return {"ratio": ratio, "min_lep": min_lep, "languages": core.priority_languages(ratio, min_lep)}

    @app.get("/v1/lep/cwa")
    def lep_cwas() -> dict:
        return {"cwas": core.cwa_ids()}

    @app.get("/v1/lep/cwa/{cwa_id}")
    def lep_cwa(cwa_id: str) -> dict:
        return core.cwa_stats(cwa_id)

    @app.post("/v1/ascii")
    def to_ascii(payload: dict = Body(...)) -> dict:
        if not isinstance(payload.get("text"), str):
            raise InvalidArgument("ascii body needs a 'text' string")
        r = ascii_safe(payload["text"], payload.get("policy", "strip_diacritics"))
        return {"text": r.text, "lossy": r.lossy, "dropped": r.dropped}

    return app


def app_from_env(env=None) -> FastAPI:
    settings = ServiceSettings.from_env(env)
    return create_app(ServiceCore.from_settings(settings), settings.token)


def serve(settings: ServiceSettings) -> None:  # pragma: no cover - blocking
    import uvicorn

    host, port = settings.host_port()
    uvicorn.run(create_app(ServiceCore.from_settings(settings), settings.token), host=host, port=port)
