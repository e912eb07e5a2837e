"""Online monitoring over TCP and WebSocket.

Both transports speak the same protocol: the client sends one JSON
object per message, ``{"event": "<raw name>"}``; the server answers
``{"verdict": "pass"}``, a fail object carrying the failing event, the
acceptable events and the trace length, or ``{"error": ...}`` for
malformed input.  Over TCP the messages are newline-delimited; over
WebSocket each text frame is one message.

Every connection gets its own session over the shared immutable
oracle.  A failed session stays open and keeps answering with its
original fail verdict.  When a connection closes, a one-line summary is
handed to the ``on_close`` callback.
"""

from __future__ import annotations

import json
import socketserver
import threading

from .errors import BindError
from .monitor import ERROR, Fail, Session, observed_text
from .traceio import Mapping, map_event


def handle_event_line(session: Session, mapping: Mapping, text: str) -> dict:
    """One protocol exchange: raw request text in, reply object out."""
    try:
        payload = json.loads(text)
    except json.JSONDecodeError:
        return {"error": "not valid JSON"}
    if not isinstance(payload, dict) or not isinstance(payload.get("event"), str):
        return {"error": 'expected {"event": "<raw name>"}'}

    observed = map_event(mapping, payload["event"])
    verdict = session.step(observed)
    if isinstance(verdict, Fail):
        counterexample = verdict.counterexample
        return {
            "verdict": "fail",
            "failing_event": observed_text(verdict.failing_event),
            "acceptable": counterexample.acceptable_texts(),
            "trace_len": len(counterexample.failing_trace),
        }
    return {"verdict": "pass"}


def session_summary(session: Session) -> str:
    outcome = "fail" if session.current is ERROR else "pass"
    return (f"session closed: {len(session.trace)} events received, "
            f"{session.steps_checked} checked, verdict {outcome}")


class _TcpHandler(socketserver.StreamRequestHandler):
    def handle(self) -> None:
        server = self.server
        session = server.session_factory()
        try:
            for raw in self.rfile:
                text = raw.decode("utf-8", errors="replace").strip()
                if not text:
                    continue
                reply = handle_event_line(session, server.mapping, text)
                self.wfile.write((json.dumps(reply) + "\n").encode("utf-8"))
                self.wfile.flush()
        except (ConnectionError, BrokenPipeError):
            pass
        finally:
            server.on_close(session_summary(session))


class TcpMonitorServer(socketserver.ThreadingTCPServer):
    allow_reuse_address = True
    daemon_threads = True

    def __init__(self, host: str, port: int, session_factory, mapping: Mapping,
                 on_close) -> None:
        self.session_factory = session_factory
        self.mapping = mapping
        self.on_close = on_close
        try:
            super().__init__((host, port), _TcpHandler)
        except OSError as exc:
            raise BindError(f"cannot listen on {host}:{port}: {exc}") from exc

    @property
    def port(self) -> int:
        return self.server_address[1]


class WebSocketMonitorServer:
    """Same protocol over WebSocket text frames."""

    def __init__(self, host: str, port: int, session_factory, mapping: Mapping,
                 on_close) -> None:
        from websockets.sync.server import serve

        self.session_factory = session_factory
        self.mapping = mapping
        self.on_close = on_close
        try:
            self._server = serve(self._handle, host, port)
        except OSError as exc:
            raise BindError(f"cannot listen on {host}:{port}: {exc}") from exc

    def _handle(self, connection) -> None:
        session = self.session_factory()
        try:
            for message in connection:
                if isinstance(message, bytes):
                    message = message.decode("utf-8", errors="replace")
                reply = handle_event_line(session, self.mapping, message)
                connection.send(json.dumps(reply))
        finally:
            self.on_close(session_summary(session))

    @property
    def port(self) -> int:
        return self._server.socket.getsockname()[1]

    def serve_forever(self) -> None:
        self._server.serve_forever()

    def shutdown(self) -> None:
        self._server.shutdown()


def create_server(kind: str, host: str, port: int, session_factory,
                  mapping: Mapping, on_close=None):
    """Build (but do not start) a monitor server of the requested kind."""
    if on_close is None:
        on_close = lambda summary: None
    if kind == "tcp":
        return TcpMonitorServer(host, port, session_factory, mapping, on_close)
    if kind == "websocket":
        return WebSocketMonitorServer(host, port, session_factory, mapping,
                                      on_close)
    raise ValueError(f"unknown listen kind {kind!r}")


def start_in_background(server) -> threading.Thread:
    """Run serve_forever on a daemon thread; returns the thread."""
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    return thread
