#!/usr/bin/env python3
"""Record an API session against the real service for the UI tests.

Boots the backend in-process with fixture upstreams (CDX captures from
May 2008 to July 2015, a liveness stub that declares one imported seed
dead, a canned live-web provider), drives the curator scenario over
HTTP, and saves every response the client needs into
``frontend/tests/fixtures/session.json``.

Run from the repository root:  python3 frontend/tools/record_session.py
"""

from __future__ import annotations

import json
import sys
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from urllib.parse import parse_qs, urlsplit

from fastapi.testclient import TestClient

from archivecurator.api import Session, create_app
from archivecurator.captures import ProbeResult
from archivecurator.liveweb import FixtureProvider
from archivecurator.service import CurationService, ServiceConfig

OUT = Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "session.json"

DEAD_URL = "http://www.tibetinfonet.net/"
CAPTURED_URL = "http://www.hrw.org/reports"

CDX_BODY = "\n".join(
    [
        f"org,hrw,www)/reports 20080515000000 {CAPTURED_URL} text/html 200 {'A' * 32} 5123",
        f"org,hrw,www)/reports 20101103120000 {CAPTURED_URL} text/html 200 {'B' * 32} 6011",
        f"org,hrw,www)/reports 20120704080000 {CAPTURED_URL} text/html 200 {'C' * 32} 5888",
        f"org,hrw,www)/reports 20150731235959 {CAPTURED_URL} text/html 200 {'D' * 32} 6120",
    ]
) + "\n"

OCCUPY_CDX_BODY = "\n".join(
    [
        f"org,occupywallst)/ 20111017000000 http://occupywallst.org/ text/html 200 {'E' * 32} 4210",
        f"org,occupywallst)/ 20140301000000 http://occupywallst.org/ text/html 200 {'F' * 32} 4444",
    ]
) + "\n"


class UpstreamHandler(BaseHTTPRequestHandler):
    def do_GET(self):
        parts = urlsplit(self.path)
        if parts.path.startswith("/cdx"):
            url = parse_qs(parts.query).get("url", [""])[0]
            if "hrw.org" in url:
                body = CDX_BODY.encode()
            elif "occupywallst.org" in url:
                body = OCCUPY_CDX_BODY.encode()
            else:
                body = b""
        else:  # save-page endpoint
            body = b"OK"
        self.send_response(200)
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def log_message(self, *args):
        pass


class DeadSeedChecker:
    def probe(self, url):
        if url.rstrip("/") == DEAD_URL.rstrip("/"):
            return ProbeResult(status_code=404, final_url=None)
        return ProbeResult(status_code=200, final_url=url)


def manifest() -> bytes:
    header = {
        "collectionId": "hrwa-1068",
        "title": "Human Rights Web Archive",
        "description": "Archived copies of websites related to human rights",
        "collectorName": "Columbia University Libraries",
    }
    seeds = [
        {"url": DEAD_URL, "title": "TibetInfoNet", "description": "Monitors the situation in Tibet",
         "subjects": ["tibet", "human rights"], "firstCapture": "20080515000000", "lastCapture": "20150731235959"},
        {"url": CAPTURED_URL, "title": "Human Rights Watch Reports", "description": "Reports archive",
         "subjects": ["human rights"], "firstCapture": "20080515000000", "lastCapture": "20150731235959"},
        {"url": "http://www.amnesty.org/en", "title": "Amnesty International", "description": "Campaigns",
         "subjects": ["human rights"], "firstCapture": "20090101000000", "lastCapture": "20150101000000"},
        {"url": "http://transparency.org/news", "title": "Transparency International", "description": "News",
         "subjects": ["human rights", "corruption"]},
        {"url": "http://www.crisisgroup.org/", "title": "International Crisis Group", "description": "Analysis",
         "subjects": ["human rights", "conflict"]},
    ]
    lines = [json.dumps(header)] + [json.dumps(s) for s in seeds]
    return ("\n".join(lines) + "\n").encode()


def main() -> int:
    upstream = ThreadingHTTPServer(("127.0.0.1", 0), UpstreamHandler)
    threading.Thread(target=upstream.serve_forever, daemon=True).start()
    host, port = upstream.server_address
    base = f"http://{host}:{port}"

    import tempfile

    with tempfile.TemporaryDirectory() as tmp:
        service = CurationService(
            ServiceConfig(
                data_dir=Path(tmp) / "data",
                cdx_endpoint=f"{base}/cdx",
                save_endpoint=f"{base}/save",
            ),
            provider=FixtureProvider(
                {
                    "occupy": [
                        {"url": "http://occupywallst.org/", "title": "Occupy Wall Street", "snippet": "Movement news"},
                        {"url": "http://interoccupy.net/hub", "title": "InterOccupy", "snippet": "Coordination hub"},
                    ]
                },
                name="fixture-provider",
            ),
            liveness_checker=DeadSeedChecker(),
        )
        sessions = {"ui-token": Session(token="ui-token", user_id="curator", display_name="Curator")}
        client = TestClient(create_app(service, sessions))
        headers = {"Authorization": "Bearer ui-token"}

        def get(path):
            response = client.get(path, headers=headers)
            assert response.status_code == 200, (path, response.text)
            return response.json()

        def post(path, **kwargs):
            response = client.post(path, headers=headers, **kwargs)
            assert response.status_code == 200, (path, response.text)
            return response.json()

        # scenario: import, audit (dead page), editable workbench, enrich
        imported = post("/collections/import", content=manifest())
        read_only_gid = imported["groupId"]

        audit = post(
            "/audits/link-rot",
            json={"seeds": [
                {"url": DEAD_URL, "category": "movement sites"},
                {"url": CAPTURED_URL, "category": "movement sites"},
            ]},
        )

        workbench = post("/groups", json={"title": "Tibet watch", "description": "Working set"})
        editable_gid = workbench["id"]
        for i in range(13):
            post(
                f"/groups/{editable_gid}/resources",
                json={"kind": "upload", "url": f"http://watch{i}.example.org/", "title": f"Watch {i}"},
            )

        imported_view = get(f"/groups/{read_only_gid}")
        dead_resource = next(
            r for r in imported_view["resources"] if r["thumbnail"]["state"] == "deadPage"
        )
        captured_resource = next(
            r for r in imported_view["resources"] if r["url"].startswith("http://www.hrw.org")
        )

        receipt = post(f"/resources/{captured_resource['id']}/archive-now")
        captured_resource = get(f"/resources/{captured_resource['id']}")

        editable_page1 = get(f"/groups/{editable_gid}?page=1")
        never_archived = editable_page1["resources"][0]

        bulk_selection = [r["id"] for r in editable_page1["resources"][:5]] + [
            r["id"] for r in imported_view["resources"][:2]
        ]
        bulk = post("/resources/bulk/tag", json={"resourceIds": bulk_selection, "tag": "review"})

        session_data = {
            "meta": {
                "readOnlyGroup": read_only_gid,
                "editableGroup": editable_gid,
                "deadResource": dead_resource["id"],
                "capturedResource": captured_resource["id"],
                "neverArchivedResource": never_archived["id"],
                "bulkSelection": bulk_selection,
            },
            "groupList": get("/groups"),
            "groups": {
                read_only_gid: {"1": get(f"/groups/{read_only_gid}?page=1")},
                editable_gid: {
                    "1": get(f"/groups/{editable_gid}?page=1"),
                    "2": get(f"/groups/{editable_gid}?page=2"),
                },
            },
            "activity": {
                read_only_gid: get(f"/groups/{read_only_gid}/activity?limit=20"),
                editable_gid: get(f"/groups/{editable_gid}/activity?limit=20"),
            },
            "resources": {
                dead_resource["id"]: get(f"/resources/{dead_resource['id']}"),
                captured_resource["id"]: captured_resource,
                never_archived["id"]: get(f"/resources/{never_archived['id']}"),
            },
            "captures": {
                f"{captured_resource['id']}:year": get(
                    f"/resources/{captured_resource['id']}/captures?granularity=year"
                ),
                f"{captured_resource['id']}:month": get(
                    f"/resources/{captured_resource['id']}/captures?granularity=month"
                ),
                f"{never_archived['id']}:year": get(
                    f"/resources/{never_archived['id']}/captures?granularity=year"
                ),
            },
            "search": {
                "human rights": get("/search?q=human%20rights"),
                "occupy": get("/search?q=occupy"),
                "occupy+live": get("/search?q=occupy&includeLive=true"),
            },
            "bulkTag": bulk,
            "archiveReceipt": receipt,
            "audit": audit,
        }

    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text(json.dumps(session_data, indent=1, sort_keys=True) + "\n", encoding="utf-8")
    upstream.shutdown()
    bins = session_data["captures"][f"{captured_resource['id']}:year"]["timeline"]["bins"]
    print(f"recorded session -> {OUT}")
    print(f"  year bins for captured resource: {len(bins)}")
    print(f"  bulk report: {bulk}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
