import json
import socket

import pytest

from cspmon.errors import BindError
from cspmon.monitor import Mode, PassSoFar, check_trace, new_session
from cspmon.server import (create_server, handle_event_line, session_summary,
                           start_in_background)
from cspmon.traceio import read_trace


@pytest.fixture
def session_factory(rover_oracle, rover_index):
    return lambda: new_session(rover_oracle, Mode.PERMISSIVE, rover_index)


@pytest.fixture
def tcp_server(session_factory, rover_mapping):
    summaries = []
    server = create_server("tcp", "127.0.0.1", 0, session_factory,
                           rover_mapping, summaries.append)
    start_in_background(server)
    yield server, summaries
    server.shutdown()
    server.server_close()


@pytest.fixture
def ws_server(session_factory, rover_mapping):
    summaries = []
    server = create_server("websocket", "127.0.0.1", 0, session_factory,
                           rover_mapping, summaries.append)
    start_in_background(server)
    yield server, summaries
    server.shutdown()


class _TcpClient:
    def __init__(self, port):
        self.sock = socket.create_connection(("127.0.0.1", port), timeout=5)
        self.reader = self.sock.makefile("r", encoding="utf-8")

    def send_raw(self, text):
        self.sock.sendall((text + "\n").encode("utf-8"))
        return json.loads(self.reader.readline())

    def send_event(self, name):
        return self.send_raw(json.dumps({"event": name}))

    def close(self):
        self.reader.close()
        self.sock.close()


def test_handle_event_line_protocol(session_factory, rover_mapping):
    session = session_factory()
    assert handle_event_line(session, rover_mapping,
                             '{"event": "mission_start"}') == \
        {"verdict": "pass"}
    assert handle_event_line(session, rover_mapping, "not json") == \
        {"error": "not valid JSON"}
    assert handle_event_line(session, rover_mapping, '{"event": 3}') == \
        {"error": 'expected {"event": "<raw name>"}'}
    assert handle_event_line(session, rover_mapping, '["event"]') == \
        {"error": 'expected {"event": "<raw name>"}'}
    # malformed requests left the session untouched
    assert len(session.trace) == 1


def test_handle_event_line_failure_payload(session_factory, rover_mapping):
    session = session_factory()
    for name in ("mission_start", "inspect.2", "radiation_level.Red"):
        assert handle_event_line(session, rover_mapping,
                                 json.dumps({"event": name})) == \
            {"verdict": "pass"}
    reply = handle_event_line(session, rover_mapping, '{"event": "move.2"}')
    assert reply == {"verdict": "fail", "failing_event": "move.2",
                     "acceptable": ["move.0"], "trace_len": 4}
    # failed sessions keep answering with the original verdict
    again = handle_event_line(session, rover_mapping, '{"event": "move.0"}')
    assert again == reply


def test_session_summary_wording(session_factory, rover_mapping):
    session = session_factory()
    handle_event_line(session, rover_mapping, '{"event": "mission_start"}')
    handle_event_line(session, rover_mapping, '{"event": "/rover/odom"}')
    assert session_summary(session) == \
        "session closed: 2 events received, 2 checked, verdict pass"
    handle_event_line(session, rover_mapping, '{"event": "move.2"}')
    handle_event_line(session, rover_mapping, '{"event": "move.2"}')
    assert session_summary(session) == \
        "session closed: 4 events received, 3 checked, verdict fail"


def test_tcp_round_trip(tcp_server):
    server, summaries = tcp_server
    client = _TcpClient(server.port)
    assert client.send_event("mission_start") == {"verdict": "pass"}
    assert client.send_event("/rover/inspect_2") == {"verdict": "pass"}
    assert client.send_event("radiation_level.Red") == {"verdict": "pass"}
    reply = client.send_event("/rover/move_2")
    assert reply == {"verdict": "fail", "failing_event": "move.2",
                     "acceptable": ["move.0"], "trace_len": 4}
    assert client.send_event("move.0") == reply
    assert client.send_raw("{oops") == {"error": "not valid JSON"}
    client.close()
    _wait_for(lambda: summaries)
    # the malformed line is answered but never enters the session
    assert summaries == ["session closed: 5 events received, "
                         "4 checked, verdict fail"]


def test_tcp_sessions_are_independent(tcp_server):
    server, _ = tcp_server
    first = _TcpClient(server.port)
    second = _TcpClient(server.port)
    assert first.send_event("mission_start") == {"verdict": "pass"}
    # the second connection starts at the initial state: inspect.2 is
    # in the alphabet but not offered before mission_start
    reply = second.send_event("inspect.2")
    assert reply["verdict"] == "fail"
    assert reply["acceptable"] == ["mission_start"]
    # the first session is unaffected by the second one's failure
    assert first.send_event("inspect.2") == {"verdict": "pass"}
    first.close()
    second.close()


def test_tcp_blank_lines_ignored(tcp_server):
    server, _ = tcp_server
    client = _TcpClient(server.port)
    client.sock.sendall(b"\n\n")
    assert client.send_event("mission_start") == {"verdict": "pass"}
    client.close()


def test_websocket_round_trip(ws_server):
    from websockets.sync.client import connect

    server, summaries = ws_server
    with connect(f"ws://127.0.0.1:{server.port}") as connection:
        for name in ("/rover/mission_start", "/rover/inspect_2",
                     "/rover/radiation_green", "/rover/move_2"):
            connection.send(json.dumps({"event": name}))
            assert json.loads(connection.recv()) == {"verdict": "pass"}
        connection.send("garbage")
        assert json.loads(connection.recv()) == {"error": "not valid JSON"}
    _wait_for(lambda: summaries)
    assert summaries == ["session closed: 4 events received, "
                         "4 checked, verdict pass"]


def test_websocket_failure_payload(ws_server):
    from websockets.sync.client import connect

    server, _ = ws_server
    with connect(f"ws://127.0.0.1:{server.port}") as connection:
        connection.send(json.dumps({"event": "move.2"}))
        reply = json.loads(connection.recv())
        assert reply == {"verdict": "fail", "failing_event": "move.2",
                         "acceptable": ["mission_start"], "trace_len": 1}


def test_bind_error_on_occupied_port(session_factory, rover_mapping):
    first = create_server("tcp", "127.0.0.1", 0, session_factory,
                          rover_mapping)
    try:
        with pytest.raises(BindError) as err:
            create_server("tcp", "127.0.0.1", first.port, session_factory,
                          rover_mapping)
        assert f":{first.port}" in str(err.value)
    finally:
        first.server_close()


def test_unknown_kind_rejected(session_factory, rover_mapping):
    with pytest.raises(ValueError):
        create_server("udp", "127.0.0.1", 0, session_factory, rover_mapping)


def test_online_equals_offline(tcp_server, rover_oracle, rover_index,
                               rover_mapping):
    from cspmon.rover import TRACE_PATH

    server, _ = tcp_server
    lines = [line for line in TRACE_PATH.read_text().splitlines()
             if line and not line.startswith("#")]
    offline_events = list(read_trace(TRACE_PATH, rover_mapping))
    offline_verdict, _ = check_trace(rover_oracle, Mode.PERMISSIVE,
                                     offline_events, rover_index)
    assert isinstance(offline_verdict, PassSoFar)

    client = _TcpClient(server.port)
    replies = [client.send_event(line) for line in lines]
    client.close()
    assert all(reply == {"verdict": "pass"} for reply in replies)


def _wait_for(condition, attempts=200):
    import time

    for _ in range(attempts):
        if condition():
            return
        time.sleep(0.01)
    raise AssertionError("condition still false after retries")
