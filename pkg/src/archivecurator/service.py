"""Service facade: store + search index + event log + upstream clients.

Every mutation runs inside a store transaction; the resulting change set
is appended (and fsynced) to the event log *before* the transaction
commits, so an acknowledged request always survives a restart and a
storage failure rolls the in-memory state back.  The search index is
rebuilt from the store at startup and kept current from the change
hints each transaction collects.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field as dataclass_field
from datetime import datetime
from pathlib import Path
from typing import Any, Callable, Optional

from . import enrichment, ingest
from .captures import (
    ArchiveRequestReceipt,
    CaptureClient,
    Granularity,
    HttpLivenessChecker,
    LinkRotReport,
    LivenessChecker,
    LivenessStatus,
    TimelineBins,
    audit_liveness,
    build_timeline,
)
from .curation import ActivityEvent, BulkTagReport, CurationStore, ExportFormat, Group, ResourceDraft
from .domain import (
    MediaType,
    Resource,
    SourceKind,
    SourceProvenance,
    Thumbnail,
    ThumbnailState,
    Timestamp14,
    normalize_url,
)
from .enrichment import CrawlAnnotation, MetadataPatch
from .errors import UpstreamUnavailable, ValidationError
from .ingest import CollectionSummary, parse_manifest
from .liveweb import LiveHit, LiveWebConnector, LiveWebProvider
from .persistence import EventLog
from .search import IndexContext, SearchIndex, SearchQuery, SearchResult

logger = logging.getLogger(__name__)

DEFAULT_PAGE_SIZE = 12  # 3x4 thumbnail grid


@dataclass(frozen=True)
class ServiceConfig:
    data_dir: Path
    cdx_endpoint: str = ""
    save_endpoint: str = ""
    request_timeout: float = 5.0
    probe_parallelism: int = 8
    durable_fsync: bool = True
    compact_every: int = 1000


@dataclass(frozen=True)
class ImportReport:
    group_id: str
    imported: int
    skipped: tuple[tuple[str, str], ...]  # (url, reason)


@dataclass(frozen=True)
class LiveResult:
    hit: LiveHit
    archival_status: Optional[tuple[Timestamp14, Timestamp14, int]] = None


@dataclass(frozen=True)
class FederatedResult:
    """Archived results first; live hits appended, never interleaved."""

    archived: SearchResult
    live: tuple[LiveResult, ...] = ()
    degraded: bool = False
    warning: Optional[str] = None


@dataclass(frozen=True)
class AuditOutcome:
    report: LinkRotReport
    dead_resource_ids: tuple[str, ...] = ()


class CurationService:
    def __init__(
        self,
        config: ServiceConfig,
        provider: Optional[LiveWebProvider] = None,
        liveness_checker: Optional[LivenessChecker] = None,
        clock: Optional[Callable[[], datetime]] = None,
        monotonic: Optional[Callable[[], float]] = None,
    ):
        self.config = config
        self.store = CurationStore(clock=clock)
        self.log = EventLog(
            config.data_dir, fsync=config.durable_fsync, compact_every=config.compact_every
        )
        self.log.load(self.store)
        self.index = SearchIndex()
        self._rebuild_index()
        self.capture_client: Optional[CaptureClient] = None
        if config.cdx_endpoint or config.save_endpoint:
            kwargs: dict[str, Any] = {"timeout": config.request_timeout}
            if clock is not None:
                kwargs["clock"] = clock
            if monotonic is not None:
                kwargs["monotonic"] = monotonic
            self.capture_client = CaptureClient(
                config.cdx_endpoint, config.save_endpoint, **kwargs
            )
        self.connector = LiveWebConnector(provider=provider, capture_client=self.capture_client)
        self.liveness_checker = liveness_checker or HttpLivenessChecker()

    # -- infrastructure -----------------------------------------------------

    def _rebuild_index(self) -> None:
        for resource in self.store.resources.values():
            self.index.index_resource(resource, self._index_context(resource))

    def _index_context(self, resource: Resource) -> IndexContext:
        source = resource.source
        if source.kind == SourceKind.ARCHIVE_COLLECTION:
            entry = self.store.collections.get(source.collection_id or "")
            if entry is not None:
                label = self.store.require_group(entry["groupId"]).title
            else:
                label = source.collector_name or "archived"
            service = badge = label
        elif source.kind == SourceKind.LIVE_WEB:
            service = badge = source.collector_name or "live web"
        else:
            service = badge = "upload"
        return IndexContext(
            group_id=self.store.home_of(resource.id), service=service, badge=badge
        )

    def _mutate(self, op: str, fn: Callable[[], Any]) -> Any:
        """Run a mutation: journal, write-ahead, commit, reindex."""
        with self.store.transaction(op) as txn:
            result = fn()
            changes = self.store.changeset(txn)
            if len(changes) > 1:  # more than the op name: state actually changed
                self.log.append(changes)
            reindex = set(txn.reindex)
            unindex = set(txn.unindex)
        for rid in unindex:
            self.index.remove(rid)
        for rid in reindex:
            resource = self.store.resources.get(rid)
            if resource is not None:
                self.index.index_resource(resource, self._index_context(resource))
        self.log.maybe_compact(self.store)
        return result

    # -- ingest ---------------------------------------------------------------

    def import_manifest(self, data: bytes, actor: str) -> ImportReport:
        manifest = parse_manifest(data)
        skipped: list[tuple[str, str]] = []

        def run() -> str:
            return ingest.import_collection(
                self.store, manifest, actor, on_reject=lambda url, reason: skipped.append((url, reason))
            )

        gid = self._mutate("import_collection", run)
        group = self.store.require_group(gid)
        for url, reason in skipped:
            logger.warning("collection %s: seed skipped: %s (%s)", manifest.collection_id, url, reason)
        return ImportReport(
            group_id=gid, imported=len(group.resource_ids), skipped=tuple(skipped)
        )

    def list_collections(self) -> list[CollectionSummary]:
        return ingest.list_collections(self.store)

    # -- search ------------------------------------------------------------------

    def search(
        self,
        query: SearchQuery,
        include_live: bool = False,
        media_type: MediaType = MediaType.WEBPAGE,
        live_limit: int = 10,
    ) -> FederatedResult:
        archived = self.index.search(query)
        if not include_live:
            return FederatedResult(archived=archived)
        try:
            hits = self.connector.query_live(query.keywords, media_type, live_limit)
        except Exception as exc:
            # archived hits are never dropped because the live side failed
            return FederatedResult(
                archived=archived, degraded=True, warning=f"live provider unavailable: {exc}"
            )
        live = []
        warning = None
        for hit in hits:
            status = None
            if self.capture_client is not None and self.config.cdx_endpoint:
                try:
                    status = self.connector.archival_status(hit.url)
                except UpstreamUnavailable as exc:
                    warning = f"archival status unavailable: {exc}"
            live.append(LiveResult(hit=hit, archival_status=status))
        return FederatedResult(
            archived=archived, live=tuple(live), degraded=warning is not None, warning=warning
        )

    # -- curation -------------------------------------------------------------------

    def create_group(self, owner: str, title: str, description: str = "") -> str:
        return self._mutate("create_group", lambda: self.store.create_group(owner, title, description))

    def create_subgroup(self, parent_id: str, owner: str, title: str, description: str = "") -> str:
        return self._mutate(
            "create_subgroup",
            lambda: self.store.create_subgroup(parent_id, owner, title, description),
        )

    def join_group(self, group_id: str, user_id: str) -> None:
        self._mutate("join_group", lambda: self.store.join_group(group_id, user_id))

    def leave_group(self, group_id: str, user_id: str) -> None:
        self._mutate("leave_group", lambda: self.store.leave_group(group_id, user_id))

    def copy_resource(self, group_id: str, resource_id: str, actor: str) -> str:
        return self._mutate(
            "copy_resource", lambda: self.store.copy_resource(group_id, resource_id, actor)
        )

    def add_live_resource(self, group_id: str, hit: LiveHit, actor: str) -> str:
        draft = ResourceDraft(
            original_url=hit.url,
            title=hit.title,
            description=hit.snippet,
            media_type=hit.media_type,
            source=SourceProvenance(kind=SourceKind.LIVE_WEB, collector_name=hit.provider),
        )
        return self._mutate("add_resource", lambda: self.store.add_resource(group_id, draft, actor))

    def add_upload_resource(
        self,
        group_id: str,
        actor: str,
        url: str,
        title: str = "",
        description: str = "",
        author: str = "",
        media_type: MediaType = MediaType.WEBPAGE,
    ) -> str:
        draft = ResourceDraft(
            original_url=url,
            title=title,
            description=description,
            author=author,
            media_type=media_type,
            source=SourceProvenance(kind=SourceKind.UPLOAD),
        )
        return self._mutate("add_resource", lambda: self.store.add_resource(group_id, draft, actor))

    def move_resource(self, resource_id: str, from_group: str, to_group: str, actor: str) -> None:
        self._mutate(
            "move_resource",
            lambda: self.store.move_resource(resource_id, from_group, to_group, actor),
        )

    def remove_resource(self, resource_id: str, actor: str) -> None:
        self._mutate("remove_resource", lambda: self.store.remove_resource(resource_id, actor))

    def copy_group(self, source_group_id: str, owner: str, new_title: str) -> str:
        return self._mutate(
            "copy_group", lambda: self.store.copy_group(source_group_id, owner, new_title)
        )

    def merge_groups(self, sources: list[str], owner: str, new_title: str) -> tuple[str, int]:
        return self._mutate("merge_groups", lambda: self.store.merge_groups(sources, owner, new_title))

    def bulk_tag(self, resource_ids: list[str], label: str, actor: str) -> BulkTagReport:
        return self._mutate("bulk_tag", lambda: self.store.bulk_tag(resource_ids, label, actor))

    def group_by_tag(self, label: str, owner: str, new_title: str) -> str:
        return self._mutate("group_by_tag", lambda: self.store.group_by_tag(label, owner, new_title))

    def export_group(self, group_id: str, fmt: ExportFormat, caller: str) -> bytes:
        return self.store.export_group(group_id, fmt, caller)

    def activity_feed(self, group_id: str, caller: str, limit: int = 50) -> list[ActivityEvent]:
        return self.store.activity_feed(group_id, caller, limit)

    # -- enrichment -----------------------------------------------------------------

    def add_tag(self, resource_id: str, label: str, actor: str) -> None:
        self._mutate("add_tag", lambda: enrichment.add_tag(self.store, resource_id, label, actor))

    def remove_tag(self, resource_id: str, label: str, actor: str) -> None:
        self._mutate(
            "remove_tag", lambda: enrichment.remove_tag(self.store, resource_id, label, actor)
        )

    def add_comment(self, resource_id: str, body: str, actor: str) -> str:
        return self._mutate(
            "add_comment", lambda: enrichment.add_comment(self.store, resource_id, body, actor)
        )

    def edit_metadata(self, resource_id: str, patch: MetadataPatch, actor: str) -> None:
        self._mutate(
            "edit_metadata", lambda: enrichment.edit_metadata(self.store, resource_id, patch, actor)
        )

    def set_crawl_annotation(
        self, resource_id: str, group_id: str, annotation: CrawlAnnotation, actor: str
    ) -> None:
        self._mutate(
            "set_crawl_annotation",
            lambda: enrichment.set_crawl_annotation(self.store, resource_id, group_id, annotation, actor),
        )

    # -- captures ------------------------------------------------------------------

    def _require_capture_client(self) -> CaptureClient:
        if self.capture_client is None:
            raise UpstreamUnavailable("no CDX/save endpoints configured")
        return self.capture_client

    def resource_captures(
        self, resource_id: str, granularity: Granularity = Granularity.YEAR
    ) -> tuple[list, TimelineBins]:
        resource = self.store.require_resource(resource_id)
        captures = self._require_capture_client().fetch_captures(resource.original_url)
        return captures, build_timeline(captures, granularity)

    def archive_now(self, resource_id: str) -> ArchiveRequestReceipt:
        resource = self.store.require_resource(resource_id)
        receipt = self._require_capture_client().archive_now(resource.original_url)
        existing = self.store.receipts.get(resource_id)
        if existing == receipt:
            return receipt  # repeat inside the idempotency window
        self._mutate("archive_now", lambda: self.store.set_receipt(resource_id, receipt))
        return receipt

    def link_rot_audit(self, seeds: list[tuple[str, str]]) -> AuditOutcome:
        """Run the audit, then flag matching resources as dead pages.

        The thumbnail flip is derived liveness state, applied to imported
        groups too; it is excluded from snapshot hashes and logs no
        activity because no curator acted.
        """
        report = audit_liveness(
            seeds, checker=self.liveness_checker, parallelism=self.config.probe_parallelism
        )
        dead_urls = set()
        for row in report.per_seed:
            if row.status == LivenessStatus.ALIVE:
                continue
            try:
                dead_urls.add(str(normalize_url(row.url)))
            except Exception:
                continue
        with self.store.lock:
            dead_ids = [
                rid
                for rid, resource in self.store.resources.items()
                if str(resource.url) in dead_urls
            ]

        def flip() -> None:
            for rid in dead_ids:
                self.store.set_thumbnail(rid, Thumbnail(state=ThumbnailState.DEAD_PAGE))

        if dead_ids:
            self._mutate("link_rot_audit", flip)
        return AuditOutcome(report=report, dead_resource_ids=tuple(sorted(dead_ids)))

    # -- views ----------------------------------------------------------------------

    def list_groups(self) -> list[Group]:
        with self.store.lock:
            return sorted(self.store.groups.values(), key=lambda g: (g.title, g.id))
