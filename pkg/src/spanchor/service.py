"""HTTP front for the annotation store.

Routes:
  GET  /api/task/next?annotator=ID  -> blinded task view | 204 when done
  POST /api/vote                    -> {"status": "accepted"}
  GET  /api/summary                 -> tallies, alpha, progress
  GET  /...                         -> static annotation frontend

Payloads never contain system identities; de-blinding happens server-side.
"""

from __future__ import annotations

import json
import mimetypes
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from urllib.parse import parse_qs, urlparse

from .annotation import (
    AnnotationStore,
    BadChoiceError,
    DuplicateVoteError,
    UnknownAnnotatorError,
    UnknownItemError,
)

_PLACEHOLDER = (
    "<!doctype html><meta charset='utf-8'><title>annotation service</title>"
    "<p>Annotation API is running. Build the frontend bundle and pass its "
    "directory via --static to serve the UI here.</p>"
)


class _Handler(BaseHTTPRequestHandler):
    # the server instance carries .store and .static_dir

    def log_message(self, fmt, *args):
        pass

    def _send_json(self, status: int, payload) -> None:
        body = json.dumps(payload, ensure_ascii=False).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json; charset=utf-8")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def do_GET(self):
        parsed = urlparse(self.path)
        if parsed.path == "/api/task/next":
            return self._task_next(parse_qs(parsed.query))
        if parsed.path == "/api/summary":
            return self._send_json(200, self.server.store.summary())
        if parsed.path.startswith("/api/"):
            return self._send_json(404, {"error": "unknown endpoint"})
        return self._static(parsed.path)

    def do_POST(self):
        parsed = urlparse(self.path)
        if parsed.path != "/api/vote":
            return self._send_json(404, {"error": "unknown endpoint"})
        length = int(self.headers.get("Content-Length") or 0)
        try:
            payload = json.loads(self.rfile.read(length).decode("utf-8"))
            annotator = str(payload["annotator"])
            item_id = str(payload["item_id"])
            choice = str(payload["choice"])
        except (ValueError, KeyError, UnicodeDecodeError):
            return self._send_json(400, {"error": "malformed vote payload"})
        store: AnnotationStore = self.server.store
        try:
            store.submit_vote(annotator, item_id, choice)
        except UnknownAnnotatorError:
            return self._send_json(403, {"error": "unknown annotator"})
        except UnknownItemError:
            return self._send_json(404, {"error": "unknown item"})
        except BadChoiceError:
            return self._send_json(400, {"error": "choice must be LEFT, RIGHT, or SAME"})
        except DuplicateVoteError:
            return self._send_json(409, {"error": "already voted on this item"})
        return self._send_json(200, {"status": "accepted"})

    def _task_next(self, query):
        annotator = (query.get("annotator") or [""])[0]
        store: AnnotationStore = self.server.store
        try:
            task = store.next_task(annotator)
        except UnknownAnnotatorError:
            return self._send_json(403, {"error": "unknown annotator"})
        if task is None:
            self.send_response(204)
            self.end_headers()
            return None
        return self._send_json(200, task)

    def _static(self, path: str):
        static_dir = self.server.static_dir
        if static_dir is None:
            body = _PLACEHOLDER.encode("utf-8")
            self.send_response(200)
            self.send_header("Content-Type", "text/html; charset=utf-8")
            self.send_header("Content-Length", str(len(body)))
            self.end_headers()
            self.wfile.write(body)
            return
        name = path.lstrip("/") or "index.html"
        root = Path(static_dir).resolve()
        target = (root / name).resolve()
        if root not in target.parents and target != root:
            return self._send_json(404, {"error": "not found"})
        if target.is_dir():
            target = target / "index.html"
        if not target.is_file():
            return self._send_json(404, {"error": "not found"})
        ctype = mimetypes.guess_type(str(target))[0] or "application/octet-stream"
        body = target.read_bytes()
        self.send_response(200)
        self.send_header("Content-Type", ctype)
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)


class AnnotationService:
    """Threaded HTTP server wrapper; port 0 picks an ephemeral port."""

    def __init__(self, store: AnnotationStore, host="127.0.0.1", port=0, static_dir=None):
        self.server = ThreadingHTTPServer((host, port), _Handler)
        self.server.store = store
        self.server.static_dir = static_dir
        self._thread: threading.Thread | None = None

    @property
    def port(self) -> int:
        return self.server.server_address[1]

    def start(self):
        self._thread = threading.Thread(target=self.server.serve_forever, daemon=True)
        self._thread.start()

    def serve_forever(self):
        self.server.serve_forever()

    def stop(self):
        self.server.shutdown()
        self.server.server_close()
        if self._thread is not None:
            self._thread.join(timeout=5)
