"""HTTP classification and auto-reply service.

A thin FastAPI layer over the same pipeline code the CLI uses: identical
input yields the identical category and confidence on both surfaces. The
model is loaded once at startup and never mutated, so concurrent requests
share one immutable artifact; swap models by restarting.
"""
from __future__ import annotations

from contextlib import asynccontextmanager
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from . import autoreply, pipeline
from .corpus import CorpusError
from .labeling import DEFAULT_CATEGORIES, load_categories
from .models import MlpModel
from .models.store import FORMAT_VERSION, load_model

DEFAULT_MAX_BODY_BYTES = 64 * 1024


class EmailQuery(BaseModel):
    subject: str = ""
    body: str = ""


class ClassifyResponse(BaseModel):
    category: str
    confidence: float
    tailored: bool


class ReplyResponse(BaseModel):
    rendered: str
    tailored: bool
    category: str
    confidence: float


class HealthResponse(BaseModel):
    status: str
    model_version: str


def create_app(
    model_path: str | Path,
    templates_path: str | Path | None = None,
    categories_path: str | Path | None = None,
    threshold: float = autoreply.DEFAULT_THRESHOLD,
    max_body_bytes: int = DEFAULT_MAX_BODY_BYTES,
) -> FastAPI:
    @asynccontextmanager
    async def lifespan(app: FastAPI):
        model = load_model(model_path)
        categories = (
            load_categories(categories_path) if categories_path else list(DEFAULT_CATEGORIES)
        )
        templates = (
            autoreply.load_templates(templates_path)
            if templates_path
            else autoreply.DEFAULT_TEMPLATES
        )
        autoreply.validate_templates(templates, categories)
        kind = "mlp" if isinstance(model, MlpModel) else "tree"
        app.state.model = model
        app.state.categories = categories
        app.state.templates = templates
        app.state.model_version = f"{kind}-v{FORMAT_VERSION}"
        yield

    app = FastAPI(title="mailtriage", lifespan=lifespan)
    app.state.model = None
    app.state.threshold = threshold

    @app.middleware("http")
    async def limit_body_size(request: Request, call_next):
        declared = request.headers.get("content-length")
        if declared and declared.isdigit() and int(declared) > max_body_bytes:
            return JSONResponse({"detail": "request body too large"}, status_code=413)
        body = await request.body()
        if len(body) > max_body_bytes:
            return JSONResponse({"detail": "request body too large"}, status_code=413)
        return await call_next(request)

    @app.exception_handler(RequestValidationError)
    async def malformed_body(request: Request, exc: RequestValidationError):
        return JSONResponse({"detail": f"malformed request body: {exc.errors()}"}, status_code=400)

    @app.exception_handler(CorpusError)
    async def unusable_email(request: Request, exc: CorpusError):
        return JSONResponse({"detail": str(exc)}, status_code=400)

    @app.get("/health", response_model=HealthResponse)
    def health():
        if app.state.model is None:
            return JSONResponse(
                {"status": "loading", "model_version": ""}, status_code=503
            )
        return HealthResponse(status="ok", model_version=app.state.model_version)

    @app.post("/classify", response_model=ClassifyResponse)
    def classify(query: EmailQuery):
        category, confidence = pipeline.classify_text(app.state.model, query.subject, query.body)
        return ClassifyResponse(
            category=category,
            confidence=confidence,
            tailored=confidence >= app.state.threshold,
        )

    @app.post("/reply", response_model=ReplyResponse)
    def reply(query: EmailQuery):
        category, confidence = pipeline.classify_text(app.state.model, query.subject, query.body)
        decision = autoreply.build_reply(
            category,
            confidence,
            app.state.templates,
            app.state.categories,
            threshold=app.state.threshold,
        )
        return ReplyResponse(
            rendered=decision.rendered,
            tailored=decision.tailored,
            category=category,
            confidence=confidence,
        )

    return app
