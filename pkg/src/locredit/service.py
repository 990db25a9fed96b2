"""JSON-over-HTTP API exposing assessment and verb classification.

Responses use the same canonical JSON as the CLI (sorted keys, six-decimal
floats) so grids compare byte-for-byte across interfaces.  The service is
stateless: caches only affect latency, never results.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

from fastapi import FastAPI, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from . import reporting
from .assessment import AssessmentConfig, Course, assess_pair
from .bloom import BloomClusterSet, LearningOutcome, VerbAssigner
from .embeddings import DeterministicProvider
from .errors import LocreditError, TransportError, VerbAssignmentError
from .wordnet import VerbTaxonomy


@dataclass
class ServiceRuntime:
    tax: VerbTaxonomy
    clusters: BloomClusterSet
    provider: object

    @property
    def provider_kind(self) -> str:
        return getattr(self.provider, "kind", "unknown")


class OutcomeModel(BaseModel):
    id: str = Field(min_length=1)
    text: str = Field(min_length=1)


class CourseModel(BaseModel):
    course_id: str = Field(min_length=1)
    role: Literal["receiving", "sending"]
    learning_outcomes: list[OutcomeModel] = Field(min_length=1)

    def to_course(self) -> Course:
        return Course(self.course_id, self.role,
                      tuple(LearningOutcome(lo.id, lo.text)
                            for lo in self.learning_outcomes))


class ConfigModel(BaseModel):
    impact: float = Field(default=30.0, ge=0.0, le=100.0)
    sim_threshold: float = Field(default=0.65, ge=0.0, le=1.0)
    lo_threshold: float = Field(default=0.5, ge=0.0, le=1.0)


class AssessRequestModel(BaseModel):
    receiving: CourseModel
    sending: CourseModel
    config: ConfigModel = ConfigModel()


class ClassifyRequestModel(BaseModel):
    verb: str = Field(min_length=1)


def _canonical_response(payload, status_code: int = 200) -> Response:
    return Response(content=reporting.canonical_json(payload),
                    status_code=status_code, media_type="application/json")


def _field_error(status: int, loc: list, message: str) -> JSONResponse:
    return JSONResponse(status_code=status,
                        content={"detail": [{"loc": loc, "msg": message}]})


def create_app(runtime: ServiceRuntime | None = None,
               allow_origins: list[str] | None = None,
               ui_dir: str | None = None) -> FastAPI:
    """Build the service; a None runtime answers 503 until one is attached
    (set ``app.state.runtime`` after loading)."""
    app = FastAPI(title="locredit", version="0.1.0")
    app.state.runtime = runtime
    app.add_middleware(CORSMiddleware,
                       allow_origins=allow_origins or ["*"],
                       allow_methods=["*"], allow_headers=["*"])

    @app.exception_handler(RequestValidationError)
    async def on_validation_error(request: Request, exc: RequestValidationError):
        errors = [{"loc": list(e.get("loc", ())), "msg": str(e.get("msg", "")),
                   "type": str(e.get("type", ""))} for e in exc.errors()]
        malformed = any(e["type"] == "json_invalid" for e in errors)
        return JSONResponse(status_code=400 if malformed else 422,
                            content={"detail": errors})

    @app.exception_handler(TransportError)
    async def on_transport_error(request: Request, exc: TransportError):
        return JSONResponse(status_code=502,
                            content={"detail": str(exc), "retryable": exc.retryable,
                                     "stage": getattr(exc, "stage", None)})

    @app.exception_handler(LocreditError)
    async def on_domain_error(request: Request, exc: LocreditError):
        return JSONResponse(status_code=422,
                            content={"detail": str(exc),
                                     "stage": getattr(exc, "stage", None)})

    def _runtime() -> ServiceRuntime | None:
        return app.state.runtime

    @app.get("/health")
    def health():
        runtime = _runtime()
        if runtime is None:
            return _canonical_response({"status": "loading",
                                        "wordnet_loaded": False,
                                        "provider_kind": None}, status_code=503)
        return _canonical_response({"status": "ok", "wordnet_loaded": True,
                                    "provider_kind": runtime.provider_kind})

    @app.post("/assess")
    def assess(body: AssessRequestModel):
        runtime = _runtime()
        if runtime is None:
            return _canonical_response({"status": "loading"}, status_code=503)
        if body.receiving.role != "receiving":
            return _field_error(422, ["body", "receiving", "role"],
                                "course must be labeled 'receiving'")
        if body.sending.role != "sending":
            return _field_error(422, ["body", "sending", "role"],
                                "course must be labeled 'sending'")
        cfg = AssessmentConfig(body.config.impact, body.config.sim_threshold,
                               body.config.lo_threshold)
        result = assess_pair(body.receiving.to_course(), body.sending.to_course(),
                             cfg, runtime.clusters, runtime.tax, runtime.provider)
        return _canonical_response(reporting.result_to_dict(result))

    @app.post("/classify-verb")
    def classify_verb(body: ClassifyRequestModel):
        runtime = _runtime()
        if runtime is None:
            return _canonical_response({"status": "loading"}, status_code=503)
        verb = body.verb.strip()
        if not verb:
            return _field_error(422, ["body", "verb"], "verb must be nonempty")
        assigner = VerbAssigner(runtime.clusters, runtime.tax)
        try:
            assignment = assigner.assign(verb)
        except VerbAssignmentError as exc:
            return JSONResponse(status_code=422, content={"detail": str(exc)})
        payload = reporting.assignment_to_dict(assignment)
        payload["level_name"] = runtime.clusters.level_name(assignment.level)
        return _canonical_response(payload)

    if ui_dir:
        from fastapi.staticfiles import StaticFiles
        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app


def demo_runtime(wordnet_dir: str, seed_verbs: str | None = None) -> ServiceRuntime:
    """Runtime with the deterministic test provider; handy for local UI work."""
    from .bloom import load_seed_verbs
    from .wordnet import load_wordnet
    return ServiceRuntime(load_wordnet(wordnet_dir), load_seed_verbs(seed_verbs),
                          DeterministicProvider())
