"""HTTP scoring service.

Exposes the trained model over two endpoints: POST /api/v1/predict scores a
single original/revision pair and GET /api/v1/health reports readiness. The
loaded model is immutable and shared across requests; hot reloads build the
replacement completely before swapping it in, so in-flight requests always
see a consistent model.
"""

from __future__ import annotations

import json
import logging
import threading
from typing import Optional

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .corpus import RevisionPair
from .errors import ConfigurationError
from .learn import ModelBundle, load_model
from .textmetrics import MetricsEngine

log = logging.getLogger(__name__)

API_PREFIX = "/api/v1"
TOP_CONTRIBUTIONS = 10


def normalize_text(text: str) -> str:
    """Collapse runs of whitespace; the scoring features tokenize on
    whitespace, so spacing-only differences cannot change a verdict."""
    return " ".join(text.split())


def validation_error(s1: str, s2: str) -> Optional[str]:
    """Reject requests no model should score. Returns a message or None."""
    a, b = normalize_text(s1), normalize_text(s2)
    if not a:
        return "s1 must contain text"
    if not b:
        return "s2 must contain text"
    if a == b:
        return "no revision detected: the two texts are identical"
    return None


def predict_payload(bundle: ModelBundle, s1: str, s2: str,
                    engine: Optional[MetricsEngine] = None,
                    top: int = TOP_CONTRIBUTIONS) -> dict:
    """Score one pair and explain it: verdict, probability of the revision
    being an improvement, and the highest-importance features active on
    this pair."""
    pair = RevisionPair(id="adhoc", s1=s1, s2=s2)
    labels, proba = bundle.predict_pairs([pair], engine=engine)
    return {
        "label": labels[0],
        "probability": float(proba[0]),
        "top_contributions": bundle.contributions(pair, engine=engine)[:top],
        "model_id": bundle.model_id,
    }


def render_payload(payload: dict) -> bytes:
    """Serialize exactly the way the HTTP layer does, so offline output is
    byte-identical to a response body."""
    return json.dumps(payload, ensure_ascii=False, allow_nan=False,
                      indent=None, separators=(",", ":")).encode("utf-8")


class ModelHolder:
    """One shared slot for the scoring model. load() parses and verifies the
    replacement before publishing it, and skips the swap when the file holds
    the model that is already live."""

    def __init__(self, bundle: Optional[ModelBundle] = None):
        self._lock = threading.Lock()
        self._bundle = bundle

    @property
    def bundle(self) -> Optional[ModelBundle]:
        return self._bundle

    def load(self, path) -> ModelBundle:
        fresh = load_model(path)
        with self._lock:
            current = self._bundle
            if current is not None and current.model_id == fresh.model_id:
                return current
            self._bundle = fresh
        log.info("model %s is live (previous: %s)", fresh.model_id,
                 current.model_id if current else "none")
        return fresh


class PredictRequest(BaseModel):
    s1: str
    s2: str


def create_app(model_path=None, bundle: Optional[ModelBundle] = None,
               cors_origins: tuple = ()) -> FastAPI:
    """Build the service. Exactly one of model_path/bundle may be given; with
    neither, the app starts without a model and answers 503 until a reload."""
    if model_path is not None and bundle is not None:
        raise ValueError("pass either model_path or bundle, not both")
    app = FastAPI(title="revision verdict service", docs_url=None,
                  redoc_url=None, openapi_url=None)
    holder = ModelHolder(bundle)
    if model_path is not None:
        holder.load(model_path)
    engine = MetricsEngine()
    app.state.models = holder
    app.state.engine = engine
    if cors_origins:
        app.add_middleware(CORSMiddleware, allow_origins=list(cors_origins),
                           allow_methods=["*"], allow_headers=["*"])

    @app.post(API_PREFIX + "/predict")
    def predict(req: PredictRequest) -> JSONResponse:
        message = validation_error(req.s1, req.s2)
        if message is not None:
            raise HTTPException(status_code=422, detail=message)
        live = holder.bundle
        if live is None:
            raise HTTPException(status_code=503, detail="no model loaded")
        return JSONResponse(predict_payload(live, req.s1, req.s2, engine=engine))

    @app.get(API_PREFIX + "/health")
    def health() -> JSONResponse:
        live = holder.bundle
        if live is None:
            return JSONResponse(status_code=503, content={
                "status": "no model loaded",
                "model_id": None,
                "schema_version": None,
            })
        return JSONResponse({
            "status": "ok",
            "model_id": live.model_id,
            "schema_version": live.schema.version,
        })

    return app


def serve(model_path, bind: str = "127.0.0.1:8000",
          cors_origins: tuple = ()) -> None:
    """Run the service under uvicorn until interrupted."""
    import uvicorn

    host, _, port = bind.rpartition(":")
    if not port.isdigit():
        raise ConfigurationError(f"bind must look like addr:port, got {bind!r}")
    app = create_app(model_path=model_path, cors_origins=cors_origins)
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port), log_level="info")
