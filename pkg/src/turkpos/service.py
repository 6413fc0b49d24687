"""HTTP platform: analysis endpoints, correction intake, retraining.

Analyses run against an immutable model snapshot taken at request start,
so requests in flight during a retrain complete on the model they started
with; the swap is a single reference replacement under a lock. Analyses
and corrections are persisted append-only and survive restarts.
"""

import hashlib
import threading
import time
from dataclasses import dataclass

from fastapi import FastAPI, HTTPException, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .config import ServiceConfig
from .corpus import read_corpus, write_corpus
from .errors import EmptyAfterCleaning
from .model import BlstmModel
from .store import AnalysisRecord, AnalysisStore, CorrectionStore, ModelDir, new_id, version_name
from .tagger import tag_text
from .trainer import Correction, merge_corrections, train

API_VERSION = "1"


class ModelManager:
    """Holds the serving model; swap is atomic, readers take snapshots."""

    def __init__(self, model: BlstmModel | None, version: str | None):
        self._lock = threading.Lock()
        self._model = model
        self._version = version

    def snapshot(self) -> tuple[BlstmModel, str]:
        with self._lock:
            if self._model is None:
                raise HTTPException(status_code=503, detail="no model loaded")
            return self._model, self._version

    def swap(self, model: BlstmModel, version: str) -> None:
        with self._lock:
            self._model = model
            self._version = version


@dataclass
class RetrainState:
    status: str = "idle"  # idle | running | completed | failed
    error: str | None = None
    started_at: float | None = None
    finished_at: float | None = None


class AnalyzeIn(BaseModel):
    text: str


class CorrectionIn(BaseModel):
    analysis_id: str
    sentence_index: int
    token_index: int
    corrected_tag: str


def create_app(config: ServiceConfig) -> FastAPI:
    app = FastAPI(title="turkpos", version=API_VERSION)
    model_dir = ModelDir(config.model_dir)
    loaded = model_dir.load_latest()
    manager = ModelManager(*loaded) if loaded else ModelManager(None, None)
    analyses = AnalysisStore(config.store_dir)
    corrections = CorrectionStore(config.store_dir)
    retrain_state = RetrainState()
    retrain_lock = threading.Lock()  # guards retrain_state transitions

    app.state.manager = manager
    app.state.analyses = analyses
    app.state.corrections = corrections

    @app.middleware("http")
    async def version_header(request: Request, call_next):
        response = await call_next(request)
        response.headers["X-API-Version"] = API_VERSION
        return response

    def run_analysis(text: str, source: str, filename: str | None) -> AnalysisRecord:
        if not text.strip():
            raise HTTPException(status_code=400, detail="empty input")
        if len(text.encode("utf-8")) > config.max_text_bytes:
            raise HTTPException(
                status_code=400,
                detail=f"input exceeds the {config.max_text_bytes} byte limit",
            )
        model, version = manager.snapshot()
        try:
            doc = tag_text(text, model, source=source, filename=filename)
        except EmptyAfterCleaning as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from None
        record = AnalysisRecord(
            id=new_id(),
            created_at=time.time(),
            source=source,
            input_hash=hashlib.sha256(text.encode("utf-8")).hexdigest(),
            result=doc,
            model_version=version,
        )
        analyses.add(record)
        return record

    @app.post("/api/analyses", status_code=201)
    def analyze_text(body: AnalyzeIn) -> dict:
        return run_analysis(body.text, source="text", filename=None).to_dict()

    @app.post("/api/documents", status_code=201)
    async def analyze_document(request: Request, filename: str = "upload.txt") -> dict:
        raw = await request.body()
        if not raw:
            raise HTTPException(status_code=400, detail="empty file")
        try:
            text = raw.decode("utf-8")
        except UnicodeDecodeError:
            raise HTTPException(
                status_code=415, detail="file is not UTF-8 text; extract plain text first"
            ) from None
        return run_analysis(text, source="document", filename=filename).to_dict()

    @app.get("/api/analyses/{analysis_id}")
    def get_analysis(analysis_id: str) -> dict:
        record = analyses.get(analysis_id)
        if record is None:
            raise HTTPException(status_code=404, detail=f"no analysis {analysis_id!r}")
        return record.to_dict()

    @app.get("/api/tagset")
    def get_tagset() -> dict:
        model, version = manager.snapshot()
        return {"tags": model.vocab.real_tags, "model_version": version}

    @app.post("/api/corrections", status_code=201)
    def submit_correction(body: CorrectionIn) -> dict:
        record = analyses.get(body.analysis_id)
        if record is None:
            raise HTTPException(status_code=404, detail=f"no analysis {body.analysis_id!r}")
        model, _ = manager.snapshot()
        doc = record.result
        if not 0 <= body.sentence_index < len(doc.sentences):
            raise HTTPException(status_code=422, detail="sentence_index out of range")
        sentence = doc.sentences[body.sentence_index]
        if not 0 <= body.token_index < len(sentence.tokens):
            raise HTTPException(status_code=422, detail="token_index out of range")
        if body.corrected_tag not in model.vocab.real_tags:
            raise HTTPException(
                status_code=422, detail=f"{body.corrected_tag!r} is not a known tag"
            )
        original = sentence.tags[body.token_index]
        if body.corrected_tag == original:
            raise HTTPException(
                status_code=409, detail="corrected tag equals the current tag"
            )
        correction = Correction(
            id=new_id(),
            analysis_id=body.analysis_id,
            sentence_index=body.sentence_index,
            token_index=body.token_index,
            original_tag=original,
            corrected_tag=body.corrected_tag,
            submitted_at=time.time(),
        )
        corrections.add(correction)
        return {
            "id": correction.id,
            "analysis_id": correction.analysis_id,
            "sentence_index": correction.sentence_index,
            "token_index": correction.token_index,
            "original_tag": correction.original_tag,
            "corrected_tag": correction.corrected_tag,
            "submitted_at": correction.submitted_at,
        }

    def base_corpus_path():
        version = model_dir.latest_version()
        if version is not None and model_dir.corpus_path(version).exists():
            return model_dir.corpus_path(version)
        return config.corpus_path

    def run_retrain(pending: list[Correction]) -> None:
        try:
            base = read_corpus(base_corpus_path())
            merged = merge_corrections(base, pending, analyses.documents())
            model, _ = train(merged, config.train)
            new_version = (model_dir.latest_version() or 0) + 1
            write_corpus(merged, model_dir.corpus_path(new_version))
            model_dir.save_version(model, new_version)
            manager.swap(model, version_name(new_version))
            corrections.mark_consumed([c.id for c in pending])
            with retrain_lock:
                retrain_state.status = "completed"
                retrain_state.finished_at = time.time()
        except Exception as exc:  # surfaced via the status endpoint
            with retrain_lock:
                retrain_state.status = "failed"
                retrain_state.error = f"{type(exc).__name__}: {exc}"
                retrain_state.finished_at = time.time()

    @app.post("/api/admin/retrain", status_code=202)
    def start_retrain() -> dict:
        with retrain_lock:
            if retrain_state.status == "running":
                raise HTTPException(status_code=409, detail="a retrain is already running")
            pending = corrections.pending()
            if not pending:
                raise HTTPException(status_code=422, detail="no pending corrections to merge")
            if base_corpus_path() is None:
                raise HTTPException(status_code=422, detail="no base corpus configured")
            retrain_state.status = "running"
            retrain_state.error = None
            retrain_state.started_at = time.time()
            retrain_state.finished_at = None
        thread = threading.Thread(target=run_retrain, args=(pending,), daemon=True)
        thread.start()
        return {"status": "running", "pending_corrections": len(pending)}

    @app.get("/api/admin/retrain")
    def retrain_status() -> dict:
        with retrain_lock:
            body = {
                "status": retrain_state.status,
                "error": retrain_state.error,
                "started_at": retrain_state.started_at,
                "finished_at": retrain_state.finished_at,
            }
        try:
            _, body["model_version"] = manager.snapshot()
        except HTTPException:
            body["model_version"] = None
        return body

    if config.static_dir:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=config.static_dir, html=True), name="ui")

    return app


def serve(config: ServiceConfig) -> None:
    import uvicorn

    uvicorn.run(create_app(config), host=config.host, port=config.port, log_level="info")
