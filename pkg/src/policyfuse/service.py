"""Minimal HTTP policy decision point.

Three JSON endpoints over HTTP/1.1:

* ``POST /v1/decide``  {"subject": s, "object": o, "access": [types...]}
  -> 200 with the canonical decision serialization; 400 for malformed bodies,
  empty access lists, or unknown access types; 422 when the subject or object
  has no label under the loaded config.
* ``GET /v1/health``   -> 200 {"status", "config_fingerprint", "mode"}.
* ``POST /v1/reload``  re-reads the config file; 200 with the new fingerprint
  on success, 409 with the validation error otherwise (old config stays live).

Handlers run one thread per connection over an immutable config reference;
reload swaps that reference atomically, so in-flight requests always see one
coherent config. No authentication: deploy behind a reverse proxy that
provides it. Every decision is appended to the audit file.
"""

from __future__ import annotations

import json
import sys
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

from .clearance import AccessRequest
from .engine import AuditRecord, append_audit, evaluate, load_config, serialize_decision
from .errors import (
    ParseError,
    SinkError,
    UnknownAccessTypeError,
    UnknownObjectError,
    UnknownSubjectError,
    ValidationError,
)


class PolicyDecisionServer(ThreadingHTTPServer):
    daemon_threads = True
    allow_reuse_address = True

    def __init__(self, address: tuple[str, int], config_path: str, audit_path: str | None = None):
        self.config_path = Path(config_path)
        self.audit_path = Path(audit_path) if audit_path else Path(str(config_path) + ".audit")
        self.active_config = load_config(self.config_path.read_bytes())
        self._reload_lock = threading.Lock()
        self._audit_lock = threading.Lock()
        super().__init__(address, DecisionHandler)

    def reload(self):
        """Re-read the config file and atomically swap it in."""
        with self._reload_lock:
            fresh = load_config(self.config_path.read_bytes())
            self.active_config = fresh
            return fresh

    def audit(self, record: AuditRecord) -> None:
        with self._audit_lock:
            with open(self.audit_path, "a", encoding="utf-8") as sink:
                append_audit(sink, record)


class DecisionHandler(BaseHTTPRequestHandler):
    server: PolicyDecisionServer
    protocol_version = "HTTP/1.1"

    def log_message(self, format, *args):  # keep the decision log in the audit file
        pass

    def _send(self, status: int, body: str) -> None:
        payload = body.encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(payload)))
        self.end_headers()
        self.wfile.write(payload)

    def _send_error(self, status: int, error: str, detail: str) -> None:
        self._send(status, json.dumps({"error": error, "detail": detail}))

    def do_GET(self):
        if self.path != "/v1/health":
            self._send_error(404, "not_found", f"unknown path {self.path!r}")
            return
        cfg = self.server.active_config
        self._send(200, json.dumps({
            "status": "ok",
            "config_fingerprint": cfg.fingerprint,
            "mode": cfg.mode.value,
        }))

    def do_POST(self):
        if self.path == "/v1/decide":
            self._decide()
        elif self.path == "/v1/reload":
            self._reload()
        else:
            self._send_error(404, "not_found", f"unknown path {self.path!r}")

    def _decide(self) -> None:
        try:
            length = int(self.headers.get("Content-Length") or 0)
        except ValueError:
            length = 0
        raw = self.rfile.read(length)
        try:
            body = json.loads(raw)
        except json.JSONDecodeError as err:
            self._send_error(400, "malformed_body", f"invalid JSON: {err.msg}")
            return
        if not isinstance(body, dict):
            self._send_error(400, "malformed_body", "body must be a JSON object")
            return
        subject = body.get("subject")
        obj = body.get("object")
        access = body.get("access")
        if (
            not isinstance(subject, str) or not subject
            or not isinstance(obj, str) or not obj
            or not isinstance(access, list) or not access
            or not all(isinstance(t, str) and t for t in access)
        ):
            self._send_error(
                400, "malformed_body",
                "body needs 'subject' (string), 'object' (string), 'access' (non-empty list of strings)",
            )
            return

        cfg = self.server.active_config  # one coherent snapshot for this request
        request = AccessRequest(subject=subject, object=obj, access=frozenset(access))
        try:
            decision = evaluate(cfg, request)
        except UnknownAccessTypeError as err:
            self._send_error(400, "unknown_access_type", str(err))
            return
        except (UnknownSubjectError, UnknownObjectError) as err:
            self._send_error(422, "unknown_entity", str(err))
            return

        try:
            self.server.audit(AuditRecord.create(cfg, request, decision))
        except (SinkError, OSError) as err:
            print(f"warning: audit append failed: {err}", file=sys.stderr)
        self._send(200, serialize_decision(decision))

    def _reload(self) -> None:
        try:
            fresh = self.server.reload()
        except (ParseError, ValidationError, OSError) as err:
            self._send_error(409, "reload_rejected", str(err))
            return
        self._send(200, json.dumps({"config_fingerprint": fresh.fingerprint}))


def run_server(config_path: str, bind: str = "127.0.0.1", port: int = 8181,
               audit_path: str | None = None) -> None:
    """Blocking entry point used by the CLI ``serve`` command."""
    server = PolicyDecisionServer((bind, port), config_path, audit_path)
    host, actual_port = server.server_address[:2]
    print(f"policy decision point listening on http://{host}:{actual_port} "
          f"(config {config_path}, fingerprint {server.active_config.fingerprint[:12]}...)")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
