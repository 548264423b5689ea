"""Shared fixtures: manifest builders, paper-scale corpora, stub probes,
and a tiny fixture HTTP server for the wire-protocol tests."""

from __future__ import annotations

import json
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

import pytest

from archivecurator.captures import ProbeResult
from archivecurator.curation import CurationStore
from archivecurator.service import CurationService, ServiceConfig

FIXTURES = Path(__file__).parent / "fixtures"

WORDS = (
    "human rights archive occupy movement tibet news social media protest "
    "culture history government statistics science art web site library "
    "collection global events crisis watch network freedom press justice"
).split()


def manifest_bytes(collection_id, title, collector="", description="", seeds=()):
    header = {
        "collectionId": collection_id,
        "title": title,
        "description": description,
        "collectorName": collector,
    }
    lines = [json.dumps(header)]
    lines.extend(json.dumps(seed) for seed in seeds)
    return ("\n".join(lines) + "\n").encode("utf-8")


def make_seeds(count, prefix="site", subjects=(), period=("20080515000000", "20150731000000")):
    seeds = []
    for i in range(count):
        word_a = WORDS[i % len(WORDS)]
        word_b = WORDS[(i * 7 + 3) % len(WORDS)]
        seed = {
            "url": f"http://{prefix}{i}.example.org/page-{i}",
            "title": f"{word_a.title()} {word_b.title()} {i}",
            "description": f"About {word_a} and {word_b}",
            "author": f"author-{i % 13}",
            "subjects": list(subjects) or [word_a],
        }
        if period:
            seed["firstCapture"], seed["lastCapture"] = period
        seeds.append(seed)
    return seeds


@pytest.fixture
def hrwa_manifest():
    # 711 seeds, Columbia-style human-rights collection
    return manifest_bytes(
        "hrwa-1068",
        "Human Rights Web Archive",
        collector="Columbia University Libraries",
        description="Archived copies of websites related to human rights",
        seeds=make_seeds(711, prefix="rights"),
    )


@pytest.fixture
def occupy_manifest():
    # 933 seeds, Internet Archive Global Events collection
    return manifest_bytes(
        "occupy-2950",
        "Occupy Movement 2011/12",
        collector="Internet Archive Global Events",
        description="Websites related to the Occupy Movement",
        seeds=make_seeds(933, prefix="occupy", subjects=["occupy", "movement"]),
    )


@pytest.fixture
def store():
    return CurationStore()


@pytest.fixture
def service(tmp_path):
    return CurationService(ServiceConfig(data_dir=tmp_path / "data"))


class StubChecker:
    """Deterministic liveness checker backed by a url -> ProbeResult map."""

    def __init__(self, results=None, default=None):
        self.results = dict(results or {})
        self.default = default or ProbeResult(status_code=200, final_url=None)
        self.calls = []

    def probe(self, url):
        self.calls.append(url)
        return self.results.get(url, self.default)


@pytest.fixture
def stub_checker():
    return StubChecker


class FixtureHttp:
    """In-process HTTP server serving canned (status, body) responses."""

    def __init__(self):
        self.routes: dict[str, tuple[int, bytes]] = {}
        self.requests: list[str] = []
        self.headers_seen: list[dict] = []
        outer = self

        class Handler(BaseHTTPRequestHandler):
            def do_GET(self):
                outer.requests.append(self.path)
                outer.headers_seen.append(dict(self.headers))
                for prefix, (status, body) in outer.routes.items():
                    if self.path.startswith(prefix):
                        self.send_response(status)
                        self.send_header("Content-Type", "text/plain; charset=utf-8")
                        self.send_header("Content-Length", str(len(body)))
                        self.end_headers()
                        self.wfile.write(body)
                        return
                self.send_response(404)
                self.end_headers()

            def log_message(self, *args):
                pass

        self.server = ThreadingHTTPServer(("127.0.0.1", 0), Handler)
        self.thread = threading.Thread(target=self.server.serve_forever, daemon=True)
        self.thread.start()

    @property
    def base_url(self):
        host, port = self.server.server_address
        return f"http://{host}:{port}"

    def route(self, prefix: str, body: bytes | str, status: int = 200):
        if isinstance(body, str):
            body = body.encode("utf-8")
        self.routes[prefix] = (status, body)

    def close(self):
        self.server.shutdown()
        self.server.server_close()


@pytest.fixture
def http_fixture():
    server = FixtureHttp()
    yield server
    server.close()
