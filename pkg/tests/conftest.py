import json
import sys
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from asrfix import Lexicon

import synth

# (criterion, passed) tuples recorded by the acceptance suite; echoed at the
# end of the run as one PASS/FAIL line each.
ACCEPTANCE_RESULTS: list = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_RESULTS:
        terminalreporter.write_sep("-", "acceptance criteria")
        for name, ok in ACCEPTANCE_RESULTS:
            terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}: {name}")


class MockModelServer:
    """Local HTTP endpoint answering {"prompt": p} with {"text": reply(p)}."""

    def __init__(self, reply):
        self._reply = reply
        server = self

        class Handler(BaseHTTPRequestHandler):
            def do_POST(self):
                length = int(self.headers.get("Content-Length", 0))
                prompt = json.loads(self.rfile.read(length))["prompt"]
                body = json.dumps({"text": server._reply(prompt)}).encode("utf-8")
                self.send_response(200)
                self.send_header("Content-Type", "application/json")
                self.send_header("Content-Length", str(len(body)))
                self.end_headers()
                self.wfile.write(body)

            def log_message(self, *args):
                pass

        self._httpd = ThreadingHTTPServer(("127.0.0.1", 0), Handler)
        self.url = f"http://127.0.0.1:{self._httpd.server_port}/"
        self._thread = threading.Thread(target=self._httpd.serve_forever, daemon=True)

    def __enter__(self):
        self._thread.start()
        return self

    def __exit__(self, *exc_info):
        self._httpd.shutdown()
        self._httpd.server_close()
        self._thread.join()


@pytest.fixture
def mock_server():
    """Factory: mock_server(reply_fn) -> running server context."""
    servers = []

    def start(reply):
        server = MockModelServer(reply)
        server.__enter__()
        servers.append(server)
        return server

    yield start
    for server in servers:
        server.__exit__(None, None, None)


@pytest.fixture
def word_lexicon():
    return Lexicon(synth.LEXICON_WORDS)


@pytest.fixture
def identity_templates(tmp_path):
    """Template file where the prompt is exactly the input text."""
    path = tmp_path / "templates.cfg"
    lines = [f"{name}={{input}}" for name in
             ("article_direct", "article_json", "seg_direct", "seg_json")]
    path.write_text("\n".join(lines) + "\n", "utf-8")
    return path


def write_manifest(path: Path, rows: list[dict]) -> Path:
    with open(path, "w", encoding="utf-8") as fh:
        for row in rows:
            fh.write(json.dumps(row, ensure_ascii=False))
            fh.write("\n")
    return path


@pytest.fixture
def manifest_writer():
    return write_manifest
