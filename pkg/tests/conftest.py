from __future__ import annotations

import json
import threading
import time
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

import pytest

from slr_screen.screening import ScreeningCriteria

from .helpers import REVIEW_ITEMS, REVIEW_TOPIC, MockEndpoint
from .test_acceptance import RESULTS as ACCEPTANCE_RESULTS


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_RESULTS):
            terminalreporter.write_line(line)


@pytest.fixture
def review_criteria() -> ScreeningCriteria:
    return ScreeningCriteria(REVIEW_TOPIC, REVIEW_ITEMS)


@pytest.fixture
def mock_endpoint():
    endpoint = MockEndpoint()

    class Handler(BaseHTTPRequestHandler):
        protocol_version = "HTTP/1.1"

        def do_POST(self):  # noqa: N802
            length = int(self.headers.get("Content-Length", 0))
            body = json.loads(self.rfile.read(length))
            body["_auth"] = self.headers.get("Authorization")
            endpoint.enter()
            try:
                if endpoint.latency:
                    time.sleep(endpoint.latency)
                status, payload = endpoint.next_response(body)
            finally:
                endpoint.leave()
            data = (json.dumps(payload) if not isinstance(payload, str) else payload).encode()
            self.send_response(status)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(data)))
            self.end_headers()
            self.wfile.write(data)

        def log_message(self, *args):
            pass

    class QuietServer(ThreadingHTTPServer):
        def handle_error(self, request, client_address):
            pass  # clients that time out close the socket mid-reply

    server = QuietServer(("127.0.0.1", 0), Handler)
    server.daemon_threads = True
    thread = threading.Thread(target=server.serve_forever, kwargs={"poll_interval": 0.02}, daemon=True)
    thread.start()
    endpoint.url = f"http://127.0.0.1:{server.server_address[1]}/v1/chat/completions"
    yield endpoint
    server.shutdown()
    server.server_close()
