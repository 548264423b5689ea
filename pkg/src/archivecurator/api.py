"""HTTP facade over the curation service.

All request/response bodies are JSON; errors come back as
``{"code", "message", "detail"}`` with a matching status code.  Identity
is a static bearer token mapped to a user in the tokens file -- the
collaboration features need identity, not security hardening.

Ranking note for API users: search relevance is BM25 (k1=1.2, b=0.75)
over weighted fields (title x3, tags x2, description x1, author x1);
ties break by capture recency, then resource id.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Optional

from fastapi import Depends, FastAPI, Header, Query, Request, Response
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from .captures import Capture, Granularity, TimelineBins
from .curation import ActivityEvent, BulkTagReport, ExportFormat, Group
from .domain import MediaType, Resource, resource_to_record, _format_instant
from .enrichment import CrawlAnnotation, CrawlDepth, CrawlFrequency, MetadataPatch
from .errors import AuthRequired, NotFound, ServiceError, ValidationError
from .liveweb import LiveHit
from .search import FacetConstraint, QueryScope, SearchQuery
from .service import DEFAULT_PAGE_SIZE, CurationService, FederatedResult, ImportReport


@dataclass(frozen=True)
class Session:
    token: str
    user_id: str
    display_name: str


def load_tokens(path: str | Path) -> dict[str, Session]:
    """Tokens file: ``{"<token>": {"userId": ..., "displayName": ...}}``."""
    raw = json.loads(Path(path).read_text(encoding="utf-8"))
    sessions = {}
    for token, entry in raw.items():
        sessions[token] = Session(
            token=token, user_id=entry["userId"], display_name=entry.get("displayName", entry["userId"])
        )
    return sessions


# -- request bodies ------------------------------------------------------------


class GroupBody(BaseModel):
    title: str
    description: str = ""


class AddResourceBody(BaseModel):
    kind: str  # copy | live | upload
    resourceId: Optional[str] = None
    url: Optional[str] = None
    title: str = ""
    description: str = ""
    author: str = ""
    snippet: str = ""
    provider: str = ""
    mediaType: str = MediaType.WEBPAGE.value


class MergeBody(BaseModel):
    sources: list[str]
    title: str


class MoveBody(BaseModel):
    from_group: str = Field(alias="from")
    to_group: str = Field(alias="to")


class BulkTagBody(BaseModel):
    resourceIds: list[str]
    tag: str


class TagBody(BaseModel):
    label: str


class CommentBody(BaseModel):
    body: str


class MetadataBody(BaseModel):
    title: Optional[str] = None
    description: Optional[str] = None
    author: Optional[str] = None
    customFields: Optional[dict[str, str]] = None


class AnnotationBody(BaseModel):
    frequency: str
    depth: str
    rationale: str = ""


class SeedItem(BaseModel):
    url: str
    category: str


class AuditBody(BaseModel):
    seeds: list[SeedItem]


# -- response shaping ------------------------------------------------------------


def _resource_view(service: CurationService, resource: Resource) -> dict[str, Any]:
    record = resource_to_record(resource)
    group_id = service.store.home_of(resource.id)
    record["groupId"] = group_id
    receipt = service.store.receipts.get(resource.id)
    record["archiveReceipt"] = (
        None
        if receipt is None
        else {
            "requestedAt": _format_instant(receipt.requested_at),
            "targetUrl": receipt.target_url,
            "accepted": receipt.accepted,
        }
    )
    annotation = service.store.get_annotation(resource.id, group_id)
    record["crawlAnnotation"] = None if annotation is None else annotation.to_record()
    return record


def _group_view(
    service: CurationService, group: Group, page: int = 1, page_size: int = DEFAULT_PAGE_SIZE
) -> dict[str, Any]:
    resources = service.store.resources_of(group.id)
    start = (page - 1) * page_size
    return {
        "id": group.id,
        "title": group.title,
        "description": group.description,
        "readOnly": group.read_only,
        "parentId": group.parent_id,
        "createdBy": group.created_by,
        "createdAt": _format_instant(group.created_at),
        "members": [{"userId": m.user_id, "role": m.role.value} for m in group.members],
        "resourceCount": len(group.resource_ids),
        "subgroups": [
            {"id": sub.id, "title": sub.title, "resourceCount": len(sub.resource_ids)}
            for sub in service.store.subgroups_of(group.id)
        ],
        "resources": [
            _resource_view(service, r) for r in resources[start : start + page_size]
        ],
        "page": page,
        "pageSize": page_size,
    }


def _event_view(event: ActivityEvent) -> dict[str, Any]:
    return {
        "actor": event.actor,
        "kind": event.kind.value,
        "target": event.target,
        "at": _format_instant(event.at),
    }


def _capture_view(capture: Capture) -> dict[str, Any]:
    return {
        "urlkey": capture.urlkey,
        "timestamp": capture.timestamp.value,
        "original": capture.original,
        "mimeType": capture.mime_type,
        "statusCode": capture.status_code,
        "digest": capture.digest,
        "length": capture.length,
    }


def _timeline_view(timeline: TimelineBins) -> dict[str, Any]:
    return {
        "granularity": timeline.granularity.value,
        "bins": [{"period": label, "count": count} for label, count in timeline.bins],
        "total": timeline.total,
    }


def _search_view(service: CurationService, outcome: FederatedResult, page: int, page_size: int) -> dict[str, Any]:
    archived = outcome.archived
    hits = []
    for hit in archived.hits:
        resource = service.store.resources.get(hit.resource_id)
        summary = hit.capture_summary
        hits.append(
            {
                "resourceId": hit.resource_id,
                "score": hit.score,
                "sourceBadge": hit.source_badge,
                "captureSummary": None
                if summary is None
                else {
                    "firstCapture": summary.first_capture.value,
                    "lastCapture": summary.last_capture.value,
                    "captureCount": summary.capture_count,
                },
                "resource": None if resource is None else _resource_view(service, resource),
            }
        )
    live = []
    for entry in outcome.live:
        status = entry.archival_status
        live.append(
            {
                "url": entry.hit.url,
                "title": entry.hit.title,
                "snippet": entry.hit.snippet,
                "mediaType": entry.hit.media_type.value,
                "provider": entry.hit.provider,
                "archivalStatus": None
                if status is None
                else {
                    "firstCapture": status[0].value,
                    "lastCapture": status[1].value,
                    "captureCount": status[2],
                },
            }
        )
    return {
        "hits": hits,
        "facetCounts": archived.facet_counts,
        "total": archived.total,
        "page": page,
        "pageSize": page_size,
        "live": live,
        "degraded": outcome.degraded,
        "warning": outcome.warning,
    }


def _bulk_view(report: BulkTagReport) -> dict[str, Any]:
    return {
        "appliedCount": report.applied_count,
        "errors": [
            {"resourceId": e.resource_id, "code": e.code, "message": e.message}
            for e in report.errors
        ],
    }


def _import_view(report: ImportReport) -> dict[str, Any]:
    return {
        "groupId": report.group_id,
        "imported": report.imported,
        "skipped": [{"url": url, "reason": reason} for url, reason in report.skipped],
    }


def _parse_facets(values: list[str]) -> frozenset[FacetConstraint]:
    constraints = set()
    for value in values:
        dimension, sep, facet_value = value.partition(":")
        if not sep or not facet_value:
            raise ValidationError(f"facet must look like dimension:value, got {value!r}")
        constraints.add(FacetConstraint(dimension=dimension, value=facet_value))
    return frozenset(constraints)


def create_app(service: CurationService, sessions: dict[str, Session]) -> FastAPI:
    app = FastAPI(title="archivecurator", docs_url=None, redoc_url=None)

    def auth(authorization: str = Header(default="")) -> Session:
        if not authorization.startswith("Bearer "):
            raise AuthRequired("missing bearer token")
        session = sessions.get(authorization[len("Bearer ") :].strip())
        if session is None:
            raise AuthRequired("unknown token")
        return session

    @app.exception_handler(ServiceError)
    async def service_error(_request: Request, exc: ServiceError):
        return JSONResponse(
            status_code=exc.http_status,
            content={"code": exc.code, "message": exc.message, "detail": exc.detail},
        )

    @app.get("/health")
    def health() -> dict[str, str]:
        return {"status": "ok"}

    # -- collections -----------------------------------------------------------

    @app.get("/collections")
    def collections(_session: Session = Depends(auth)) -> list[dict[str, Any]]:
        return [
            {
                "groupId": c.group_id,
                "title": c.title,
                "description": c.description,
                "resourceCount": c.resource_count,
                "collectorName": c.collector_name,
            }
            for c in service.list_collections()
        ]

    @app.post("/collections/import")
    async def import_collection(request: Request, session: Session = Depends(auth)):
        data = await request.body()
        return _import_view(service.import_manifest(data, session.user_id))

    # -- search ------------------------------------------------------------------

    @app.get("/search")
    def search(
        q: str = "",
        facets: list[str] = Query(default=[]),
        collections: Optional[str] = None,
        domain: Optional[str] = None,
        pathPrefix: Optional[str] = None,
        titleOnly: bool = False,
        page: int = 1,
        pageSize: int = DEFAULT_PAGE_SIZE,
        includeLive: bool = False,
        mediaType: str = MediaType.WEBPAGE.value,
        liveLimit: int = 10,
        _session: Session = Depends(auth),
    ):
        scope = QueryScope(
            collections=frozenset(collections.split(",")) if collections else None,
            domain=domain,
            path_prefix=pathPrefix,
            title_only=titleOnly,
        )
        query = SearchQuery(
            keywords=q, facets=_parse_facets(facets), scope=scope, page=page, page_size=pageSize
        )
        outcome = service.search(
            query,
            include_live=includeLive,
            media_type=MediaType(mediaType),
            live_limit=liveLimit,
        )
        return _search_view(service, outcome, page, pageSize)

    # -- groups ---------------------------------------------------------------------

    @app.get("/groups")
    def groups(_session: Session = Depends(auth)) -> list[dict[str, Any]]:
        return [
            {
                "id": g.id,
                "title": g.title,
                "description": g.description,
                "readOnly": g.read_only,
                "parentId": g.parent_id,
                "resourceCount": len(g.resource_ids),
            }
            for g in service.list_groups()
        ]

    @app.post("/groups")
    def create_group(body: GroupBody, session: Session = Depends(auth)):
        gid = service.create_group(session.user_id, body.title, body.description)
        return _group_view(service, service.store.require_group(gid))

    @app.get("/groups/{group_id}")
    def get_group(
        group_id: str,
        page: int = 1,
        pageSize: int = DEFAULT_PAGE_SIZE,
        _session: Session = Depends(auth),
    ):
        return _group_view(service, service.store.require_group(group_id), page, pageSize)

    @app.post("/groups/{group_id}/subgroups")
    def create_subgroup(group_id: str, body: GroupBody, session: Session = Depends(auth)):
        gid = service.create_subgroup(group_id, session.user_id, body.title, body.description)
        return _group_view(service, service.store.require_group(gid))

    @app.post("/groups/{group_id}/join")
    def join_group(group_id: str, session: Session = Depends(auth)):
        service.join_group(group_id, session.user_id)
        return {"joined": group_id}

    @app.post("/groups/{group_id}/leave")
    def leave_group(group_id: str, session: Session = Depends(auth)):
        service.leave_group(group_id, session.user_id)
        return {"left": group_id}

    @app.post("/groups/{group_id}/resources")
    def add_resource(group_id: str, body: AddResourceBody, session: Session = Depends(auth)):
        if body.kind == "copy":
            if not body.resourceId:
                raise ValidationError("copy needs resourceId")
            rid = service.copy_resource(group_id, body.resourceId, session.user_id)
        elif body.kind == "live":
            if not body.url:
                raise ValidationError("live hit needs url")
            hit = LiveHit(
                url=body.url,
                title=body.title,
                snippet=body.snippet,
                media_type=MediaType(body.mediaType),
                provider=body.provider or "live web",
            )
            rid = service.add_live_resource(group_id, hit, session.user_id)
        elif body.kind == "upload":
            if not body.url:
                raise ValidationError("upload needs url")
            rid = service.add_upload_resource(
                group_id,
                session.user_id,
                url=body.url,
                title=body.title,
                description=body.description,
                author=body.author,
                media_type=MediaType(body.mediaType),
            )
        else:
            raise ValidationError(f"unknown resource kind {body.kind!r}")
        return _resource_view(service, service.store.require_resource(rid))

    @app.post("/groups/{group_id}/merge")
    def merge_groups(group_id: str, body: MergeBody, session: Session = Depends(auth)):
        gid, dropped = service.merge_groups([group_id] + body.sources, session.user_id, body.title)
        view = _group_view(service, service.store.require_group(gid))
        view["duplicatesDropped"] = dropped
        return view

    @app.post("/groups/{group_id}/copy")
    def copy_group(group_id: str, body: GroupBody, session: Session = Depends(auth)):
        gid = service.copy_group(group_id, session.user_id, body.title)
        return _group_view(service, service.store.require_group(gid))

    @app.get("/groups/{group_id}/export")
    def export_group(group_id: str, format: str = "manifest", session: Session = Depends(auth)):
        try:
            fmt = ExportFormat(format)
        except ValueError:
            raise ValidationError(f"unknown export format {format!r}")
        data = service.export_group(group_id, fmt, session.user_id)
        return Response(content=data, media_type="application/x-ndjson")

    @app.get("/groups/{group_id}/activity")
    def activity(group_id: str, limit: int = 50, session: Session = Depends(auth)):
        events = service.activity_feed(group_id, session.user_id, limit)
        return [_event_view(e) for e in events]

    # -- resources ---------------------------------------------------------------------

    @app.get("/resources/{resource_id}")
    def get_resource(resource_id: str, _session: Session = Depends(auth)):
        return _resource_view(service, service.store.require_resource(resource_id))

    @app.delete("/resources/{resource_id}")
    def delete_resource(resource_id: str, session: Session = Depends(auth)):
        service.remove_resource(resource_id, session.user_id)
        return {"removed": resource_id}

    @app.post("/resources/{resource_id}/move")
    def move_resource(resource_id: str, body: MoveBody, session: Session = Depends(auth)):
        service.move_resource(resource_id, body.from_group, body.to_group, session.user_id)
        return {"moved": resource_id, "to": body.to_group}

    @app.post("/resources/bulk/tag")
    def bulk_tag(body: BulkTagBody, session: Session = Depends(auth)):
        return _bulk_view(service.bulk_tag(body.resourceIds, body.tag, session.user_id))

    @app.post("/tags/{label}/group")
    def group_by_tag(label: str, body: GroupBody, session: Session = Depends(auth)):
        gid = service.group_by_tag(label, session.user_id, body.title)
        return _group_view(service, service.store.require_group(gid))

    @app.post("/resources/{resource_id}/tags")
    def add_tag(resource_id: str, body: TagBody, session: Session = Depends(auth)):
        service.add_tag(resource_id, body.label, session.user_id)
        return _resource_view(service, service.store.require_resource(resource_id))

    @app.delete("/resources/{resource_id}/tags/{label}")
    def remove_tag(resource_id: str, label: str, session: Session = Depends(auth)):
        service.remove_tag(resource_id, label, session.user_id)
        return _resource_view(service, service.store.require_resource(resource_id))

    @app.post("/resources/{resource_id}/comments")
    def add_comment(resource_id: str, body: CommentBody, session: Session = Depends(auth)):
        comment_id = service.add_comment(resource_id, body.body, session.user_id)
        view = _resource_view(service, service.store.require_resource(resource_id))
        view["commentId"] = comment_id
        return view

    @app.patch("/resources/{resource_id}/metadata")
    def edit_metadata(resource_id: str, body: MetadataBody, session: Session = Depends(auth)):
        patch = MetadataPatch(
            title=body.title,
            description=body.description,
            author=body.author,
            custom_fields=body.customFields,
        )
        service.edit_metadata(resource_id, patch, session.user_id)
        return _resource_view(service, service.store.require_resource(resource_id))

    @app.put("/resources/{resource_id}/crawl-annotation")
    def set_annotation(resource_id: str, body: AnnotationBody, session: Session = Depends(auth)):
        try:
            annotation = CrawlAnnotation(
                frequency=CrawlFrequency(body.frequency),
                depth=CrawlDepth(body.depth),
                rationale=body.rationale,
            )
        except ValueError as exc:
            raise ValidationError(f"bad crawl annotation: {exc}")
        group_id = service.store.home_of(resource_id)
        service.set_crawl_annotation(resource_id, group_id, annotation, session.user_id)
        return _resource_view(service, service.store.require_resource(resource_id))

    @app.get("/resources/{resource_id}/captures")
    def resource_captures(
        resource_id: str, granularity: str = "year", _session: Session = Depends(auth)
    ):
        try:
            gran = Granularity(granularity)
        except ValueError:
            raise ValidationError(f"granularity must be year or month, got {granularity!r}")
        captures, timeline = service.resource_captures(resource_id, gran)
        return {
            "captures": [_capture_view(c) for c in captures],
            "timeline": _timeline_view(timeline),
        }

    @app.post("/resources/{resource_id}/archive-now")
    def archive_now(resource_id: str, _session: Session = Depends(auth)):
        receipt = service.archive_now(resource_id)
        return {
            "requestedAt": _format_instant(receipt.requested_at),
            "targetUrl": receipt.target_url,
            "accepted": receipt.accepted,
        }

    # -- audits -------------------------------------------------------------------------

    @app.post("/audits/link-rot")
    def link_rot(body: AuditBody, _session: Session = Depends(auth)):
        if not body.seeds:
            raise ValidationError("audit needs seeds")
        outcome = service.link_rot_audit([(s.url, s.category) for s in body.seeds])
        report = outcome.report
        return {
            "categories": {
                name: {"total": s.total, "alive": s.alive, "percentAlive": s.percent_alive}
                for name, s in report.categories.items()
            },
            "perSeed": [
                {"url": row.url, "category": row.category, "status": row.status.value}
                for row in report.per_seed
            ],
            "deadResourceIds": list(outcome.dead_resource_ids),
        }

    return app
