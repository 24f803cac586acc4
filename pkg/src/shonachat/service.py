"""HTTP chat service: sessions and turns over JSON.

Wraps the router in a small FastAPI app. Sessions live in memory with a TTL;
the only state that survives a restart is the append-only turn log, so
replaying a script against a restarted service with the same model, policy,
and knowledge base reproduces the same replies.

Request bodies are parsed by hand so the error contract stays explicit:
413 for oversized bodies, 400 for malformed JSON or missing fields, 404 for
unknown or expired sessions.
"""

from __future__ import annotations

import json
import logging
import threading
import time
import uuid
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .classifier import IntentModel, load_model
from .rag import KnowledgeBase, load_kb
from .router import DialoguePolicy, ResponsePlan, Session, load_policy, route_turn

__all__ = ["ServiceConfig", "ChatService", "ServiceError", "create_app", "build_service"]

logger = logging.getLogger(__name__)


@dataclass
class ServiceConfig:
    host: str = "127.0.0.1"
    port: int = 8000
    model_path: str | None = None
    policy_path: str | None = None
    kb_path: str | None = None
    session_ttl_seconds: float = 1800.0
    max_request_bytes: int = 65536
    log_path: str | None = None

    def __post_init__(self):
        if not 0 < self.port < 65536:
            raise ValueError(f"invalid port {self.port}")
        if self.session_ttl_seconds < 0:
            raise ValueError("session_ttl_seconds must be >= 0")


class ServiceError(Exception):
    def __init__(self, status: int, message: str):
        super().__init__(message)
        self.status = status
        self.message = message


class ChatService:
    """Session registry plus turn dispatch, independent of the HTTP layer.

    Turns within one session are serialized by a per-session lock; different
    sessions proceed concurrently. Model, policy, and knowledge base are
    shared read-only.
    """

    def __init__(
        self,
        model: IntentModel | None,
        policy: DialoguePolicy | None,
        kb: KnowledgeBase | None,
        config: ServiceConfig | None = None,
        clock: Callable[[], float] = time.time,
    ):
        self.model = model
        self.policy = policy
        self.kb = kb
        self.config = config or ServiceConfig()
        self.clock = clock
        self._sessions: dict[str, Session] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._registry_lock = threading.Lock()

    @property
    def ready(self) -> bool:
        return self.model is not None and self.policy is not None and self.kb is not None

    def create_session(self) -> str:
        now = self.clock()
        session_id = uuid.uuid4().hex
        with self._registry_lock:
            self._sessions[session_id] = Session(id=session_id, created_at=now, last_active=now)
            self._locks[session_id] = threading.Lock()
        return session_id

    def expire_sessions(self, now: float | None = None) -> int:
        """Drop sessions idle for at least the configured TTL; returns the count removed."""
        now = self.clock() if now is None else now
        ttl = self.config.session_ttl_seconds
        with self._registry_lock:
            stale = [sid for sid, s in self._sessions.items() if now - s.last_active >= ttl]
            for sid in stale:
                del self._sessions[sid]
                del self._locks[sid]
        return len(stale)

    def session_count(self) -> int:
        with self._registry_lock:
            return len(self._sessions)

    def chat(self, session_id: str, text: str) -> ResponsePlan:
        if not self.ready:
            raise ServiceError(503, "service is still starting")
        self.expire_sessions()
        with self._registry_lock:
            session = self._sessions.get(session_id)
            lock = self._locks.get(session_id)
        if session is None:
            raise ServiceError(404, f"unknown or expired session {session_id!r}")
        with lock:
            plan = route_turn(session, text, self.model, self.policy, self.kb, clock=self.clock)
            self._persist_turn(session)
            if plan.session_terminated:
                with self._registry_lock:
                    self._sessions.pop(session_id, None)
                    self._locks.pop(session_id, None)
        return plan

    def _persist_turn(self, session: Session) -> None:
        if not self.config.log_path:
            return
        turn = session.history[-1]
        record = json.loads(turn.to_json())
        record["session_id"] = session.id
        with open(self.config.log_path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(record, ensure_ascii=False) + "\n")

    def health(self) -> dict:
        return {
            "status": "ok" if self.ready else "starting",
            "model_loaded": self.model is not None,
            "kb_chunks": len(self.kb) if self.kb is not None else 0,
        }


def plan_to_response(plan: ResponsePlan) -> dict:
    """Wire format for one turn; intent and confidence travel together."""
    body: dict = {
        "reply": plan.reply,
        "route": plan.route.value,
        "session_terminated": plan.session_terminated,
    }
    if plan.intent is not None:
        body["intent"] = plan.intent
        body["confidence"] = plan.confidence
    if plan.retrieval_trace is not None:
        body["retrieval_trace"] = list(plan.retrieval_trace)
    return body


def create_app(service: ChatService) -> FastAPI:
    app = FastAPI(title="shonachat", docs_url=None, redoc_url=None)
    # The browser client may be served from a different origin than the API.
    # The API carries no credentials, so a blanket allowance is safe.
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["GET", "POST"],
        allow_headers=["Content-Type"],
    )

    @app.post("/sessions")
    def create_session():
        return {"session_id": service.create_session()}

    @app.post("/chat")
    async def chat(request: Request):
        raw = await request.body()
        if len(raw) > service.config.max_request_bytes:
            return JSONResponse({"error": "request body too large"}, status_code=413)
        try:
            payload = json.loads(raw.decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError):
            return JSONResponse({"error": "request body is not valid JSON"}, status_code=400)
        if not isinstance(payload, dict) or not isinstance(payload.get("session_id"), str) or not isinstance(
            payload.get("text"), str
        ):
            return JSONResponse({"error": "expected {session_id: string, text: string}"}, status_code=400)
        try:
            plan = service.chat(payload["session_id"], payload["text"])
        except ServiceError as exc:
            return JSONResponse({"error": exc.message}, status_code=exc.status)
        return plan_to_response(plan)

    @app.get("/health")
    def health():
        return service.health()

    return app


def build_service(config: ServiceConfig, clock: Callable[[], float] = time.time) -> ChatService:
    """Load model, policy, and knowledge base from the configured paths."""
    for name, path in (("model", config.model_path), ("policy", config.policy_path), ("kb", config.kb_path)):
        if path is None:
            raise ValueError(f"service config is missing the {name} path")
        if not Path(path).is_file():
            raise FileNotFoundError(f"{name} file not found: {path}")
    model = load_model(config.model_path)
    policy = load_policy(config.policy_path)
    kb = load_kb(config.kb_path)
    logger.info("service ready: %d labels, %d kb chunks", len(model.codec), len(kb))
    return ChatService(model=model, policy=policy, kb=kb, config=config, clock=clock)
