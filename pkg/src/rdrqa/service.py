"""HTTP service: analysis, answering with disambiguation sessions, KB editing.

Endpoints (JSON bodies):

    POST /analyze                  {"question": ..., "pretagged": bool?}
    POST /answer                   {"question": ..., "pretagged": bool?}
    POST /answer/<session>/choice  {"choice": element name}
    GET  /kb                       knowledge-base tree (file format)
    GET  /kb/path?question=...     evaluation path for a question
    POST /kb/exception             {"question", "rule_text", "extra",
                                    "conclusion", "dry_run"?}
    GET  /ontology/summary

Disambiguation is session-based: an ambiguous answer returns a pending
choice with a session id; posting a selection resumes the very same mapping,
so identical choice sequences always produce identical answers. Knowledge-
base edits are serialized through a single writer lock and persisted
atomically; concurrent readers keep analyzing against the pre-edit tree.
"""

from __future__ import annotations

import json
import threading
import time
import uuid
from dataclasses import dataclass, field
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from typing import Optional
from urllib.parse import parse_qs, urlparse

from .answering import AnswerError, PendingAnswer, UnsupportedComparisonError
from .engine import Engine
from .ir import InstantiationError
from .mapping import ChoiceError, MappingError
from .patterns import RuleSemanticError, RuleSyntaxError
from .scrdr import ConsistencyError, RuleRejectedError

SESSION_TTL_SECONDS = 1800.0


@dataclass
class Session:
    session_id: str
    question: str
    pretagged: Optional[bool]
    choices: dict[str, str] = field(default_factory=dict)
    pending_key: Optional[str] = None
    created_at: float = field(default_factory=time.monotonic)

    def expired(self) -> bool:
        return time.monotonic() - self.created_at > SESSION_TTL_SECONDS


class QAService:
    """Protocol-independent request handlers; the HTTP layer is a shell."""

    def __init__(self, engine: Engine):
        self.engine = engine
        self.sessions: dict[str, Session] = {}
        self.kb_lock = threading.Lock()
        self.session_lock = threading.Lock()

    # each handler returns (status, payload)

    def analyze(self, body: dict) -> tuple[int, dict]:
        question = body.get("question")
        if not question:
            return 400, {"error": "question is required"}
        outcome = self.engine.analyze(question, body.get("pretagged"))
        return 200, outcome.to_dict()

    def _run_answer(self, session: Session) -> tuple[int, dict]:
        result = self.engine.answer(
            session.question, session.pretagged, choices=session.choices
        )
        if isinstance(result, PendingAnswer):
            session.pending_key = result.key
            with self.session_lock:
                self.sessions[session.session_id] = session
            payload = result.to_dict()
            payload["session_id"] = session.session_id
            return 200, {"pending": payload}
        with self.session_lock:
            self.sessions.pop(session.session_id, None)
        return 200, {"answer": result.to_dict()}

    def answer(self, body: dict) -> tuple[int, dict]:
        question = body.get("question")
        if not question:
            return 400, {"error": "question is required"}
        session = Session(uuid.uuid4().hex, question, body.get("pretagged"))
        try:
            return self._run_answer(session)
        except MappingError as exc:
            return 422, {"error": str(exc), "slot": exc.slot, "term": exc.term}
        except UnsupportedComparisonError as exc:
            return 422, {"error": str(exc), "unsupported": "superlative"}
        except (AnswerError, ValueError, InstantiationError) as exc:
            return 422, {"error": str(exc)}

    def answer_choice(self, session_id: str, body: dict) -> tuple[int, dict]:
        with self.session_lock:
            session = self.sessions.get(session_id)
        if session is None or session.expired():
            with self.session_lock:
                self.sessions.pop(session_id, None)
            return 410, {"error": "session expired or unknown; re-ask the question"}
        selection = body.get("choice")
        if not selection:
            return 400, {"error": "choice is required"}
        if session.pending_key is None:
            return 400, {"error": "session has no pending choice"}
        session.choices[session.pending_key] = selection
        try:
            return self._run_answer(session)
        except ChoiceError as exc:
            del session.choices[session.pending_key]
            return 400, {"error": str(exc)}
        except MappingError as exc:
            return 422, {"error": str(exc), "slot": exc.slot, "term": exc.term}
        except (AnswerError, UnsupportedComparisonError) as exc:
            return 422, {"error": str(exc)}

    def kb_tree(self) -> tuple[int, dict]:
        return 200, self.engine.kb.to_dict()

    def kb_path(self, query: dict) -> tuple[int, dict]:
        questions = query.get("question")
        if not questions:
            return 400, {"error": "question query parameter is required"}
        pretagged = None
        if "pretagged" in query:
            pretagged = query["pretagged"][0] in ("1", "true", "yes")
        outcome = self.engine.analyze(questions[0], pretagged)
        return 200, {
            "path": outcome.path,
            "last_fired": outcome.last_fired,
            "ir": outcome.ir.to_dict() if outcome.ir else None,
            "unanalyzed": outcome.ir is None,
        }

    def kb_exception(self, body: dict) -> tuple[int, dict]:
        question = body.get("question")
        rule_text = body.get("rule_text")
        if not question or not rule_text:
            return 400, {"error": "question and rule_text are required"}
        with self.kb_lock:
            try:
                report = self.engine.add_exception(
                    case_question=question,
                    rule_text=rule_text,
                    extra=tuple(body.get("extra", ())),
                    conclusion=body.get("conclusion"),
                    pretagged=body.get("pretagged"),
                    dry_run=bool(body.get("dry_run")),
                )
            except RuleSyntaxError as exc:
                return 400, {
                    "error": str(exc), "line": exc.line, "column": exc.column,
                    "expected": exc.expected,
                }
            except (RuleSemanticError, ValueError) as exc:
                return 400, {"error": str(exc)}
            except ConsistencyError as exc:
                return 409, {"error": str(exc), "cornerstone": exc.cornerstone}
            except RuleRejectedError as exc:
                return 422, {"error": str(exc)}
        return 200, report

    def ontology_summary(self) -> tuple[int, dict]:
        summary = self.engine.ontology.summary()
        summary["concept_names"] = self.engine.ontology.names("concept")
        summary["relation_names"] = self.engine.ontology.names("relation")
        return 200, summary


class _Handler(BaseHTTPRequestHandler):
    service: QAService  # injected by make_server

    def _send(self, status: int, payload: dict) -> None:
        body = json.dumps(payload, ensure_ascii=False).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json; charset=utf-8")
        self.send_header("Content-Length", str(len(body)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.end_headers()
        self.wfile.write(body)

    def _body(self) -> dict:
        length = int(self.headers.get("Content-Length") or 0)
        if length == 0:
            return {}
        raw = self.rfile.read(length)
        try:
            return json.loads(raw.decode("utf-8"))
        except json.JSONDecodeError:
            return {"_malformed": True}

    def do_OPTIONS(self):  # CORS preflight for the workbench
        self.send_response(204)
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")
        self.end_headers()

    def do_GET(self):
        parsed = urlparse(self.path)
        if parsed.path == "/kb":
            self._send(*self.service.kb_tree())
        elif parsed.path == "/kb/path":
            self._send(*self.service.kb_path(parse_qs(parsed.query)))
        elif parsed.path == "/ontology/summary":
            self._send(*self.service.ontology_summary())
        else:
            self._send(404, {"error": f"no such endpoint {parsed.path}"})

    def do_POST(self):
        parsed = urlparse(self.path)
        body = self._body()
        if body.get("_malformed"):
            self._send(400, {"error": "request body is not valid JSON"})
            return
        if parsed.path == "/analyze":
            self._send(*self.service.analyze(body))
        elif parsed.path == "/answer":
            self._send(*self.service.answer(body))
        elif parsed.path.startswith("/answer/") and parsed.path.endswith("/choice"):
            session_id = parsed.path[len("/answer/"):-len("/choice")]
            self._send(*self.service.answer_choice(session_id, body))
        elif parsed.path == "/kb/exception":
            self._send(*self.service.kb_exception(body))
        else:
            self._send(404, {"error": f"no such endpoint {parsed.path}"})

    def log_message(self, fmt, *args):  # quiet by default
        pass


def make_server(engine: Engine, host: str = "127.0.0.1", port: int = 0) -> ThreadingHTTPServer:
    service = QAService(engine)
    handler = type("BoundHandler", (_Handler,), {"service": service})
    server = ThreadingHTTPServer((host, port), handler)
    server.service = service  # type: ignore[attr-defined]
    return server


def serve(engine: Engine, host: str, port: int) -> None:
    server = make_server(engine, host, port)
    print(f"serving on http://{host}:{server.server_address[1]}")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        server.shutdown()
