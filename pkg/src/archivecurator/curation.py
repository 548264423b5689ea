"""Group lifecycle and membership: the in-memory state store.

:class:`CurationStore` owns all mutable service state (groups, resources,
activity, receipts, crawl annotations, the collection registry) and the
operations on it: create/sub-group/copy/merge/move, bulk tagging,
grouping by tag, export, and the per-group activity log.

Mutations run inside a transaction that journals every touched entry, so
a failed operation (or a failed write-ahead append) rolls back cleanly
and the committed change set can be captured for the event log.  All
public operations take one re-entrant lock: readers see committed state
only, and cross-group operations are atomic.

Imported collections are read-only forever.  The snapshot hash of a
group covers its title, description, flags, membership order of
resources, and every resource record except the thumbnail state (which
is derived liveness information, updated by audits even on imported
groups) -- see :meth:`CurationStore.group_snapshot_hash`.
"""

from __future__ import annotations

import hashlib
import json
import threading
import uuid
from contextlib import contextmanager
from dataclasses import dataclass, replace
from datetime import datetime, timezone
from enum import Enum
from typing import Any, Callable, Iterable, Optional

from . import ingest
from .captures import ArchiveRequestReceipt, receipt_from_record, receipt_to_record
from .domain import (
    MediaType,
    NormalizedUrl,
    Resource,
    SourceProvenance,
    Thumbnail,
    normalize_tag,
    normalize_url,
    resource_from_record,
    resource_to_record,
    _format_instant,
    _parse_instant,
)
from .errors import (
    DepthExceeded,
    DuplicateInGroup,
    NotFound,
    NotMember,
    ReadOnlyViolation,
    ServiceError,
    ValidationError,
)

SCHEMA_VERSION = 1

MISSING = object()


class Role(str, Enum):
    OWNER = "owner"
    MEMBER = "member"


class ActivityKind(str, Enum):
    RESOURCE_ADDED = "resourceAdded"
    RESOURCE_EDITED = "resourceEdited"
    RESOURCE_DELETED = "resourceDeleted"
    RESOURCE_MOVED = "resourceMoved"
    MEMBER_JOINED = "memberJoined"
    MEMBER_LEFT = "memberLeft"
    GROUP_CREATED = "groupCreated"
    COMMENT_ADDED = "commentAdded"
    TAG_ADDED = "tagAdded"


@dataclass(frozen=True)
class Member:
    user_id: str
    role: Role


@dataclass(frozen=True)
class ActivityEvent:
    actor: str
    kind: ActivityKind
    target: str
    at: datetime


@dataclass(frozen=True)
class Group:
    """A collection or sub-group of resources.

    Activity lives in the store (``store.activity[group.id]``) so that
    group records stay small in the event log.
    """

    id: str
    title: str
    description: str
    read_only: bool
    parent_id: Optional[str]
    members: tuple[Member, ...]
    resource_ids: tuple[str, ...]
    created_by: str
    created_at: datetime

    def is_member(self, user_id: str) -> bool:
        return any(m.user_id == user_id for m in self.members)


@dataclass(frozen=True)
class ResourceDraft:
    """What a new resource needs before the store assigns an id."""

    original_url: str
    title: str = ""
    description: str = ""
    author: str = ""
    media_type: MediaType = MediaType.WEBPAGE
    source: Optional[SourceProvenance] = None
    tags: frozenset[str] = frozenset()
    custom_fields: Optional[dict[str, str]] = None
    thumbnail: Thumbnail = Thumbnail()


@dataclass(frozen=True)
class ItemError:
    resource_id: str
    code: str
    message: str


@dataclass(frozen=True)
class BulkTagReport:
    applied_count: int
    errors: tuple[ItemError, ...]


class ExportFormat(str, Enum):
    MANIFEST = "manifest"
    RECORD_LINES = "recordLines"


def group_to_record(g: Group) -> dict[str, Any]:
    return {
        "id": g.id,
        "title": g.title,
        "description": g.description,
        "readOnly": g.read_only,
        "parentId": g.parent_id,
        "members": [{"userId": m.user_id, "role": m.role.value} for m in g.members],
        "resourceIds": list(g.resource_ids),
        "createdBy": g.created_by,
        "createdAt": _format_instant(g.created_at),
    }


def group_from_record(d: dict[str, Any]) -> Group:
    return Group(
        id=d["id"],
        title=d["title"],
        description=d["description"],
        read_only=d["readOnly"],
        parent_id=d["parentId"],
        members=tuple(Member(m["userId"], Role(m["role"])) for m in d["members"]),
        resource_ids=tuple(d["resourceIds"]),
        created_by=d["createdBy"],
        created_at=_parse_instant(d["createdAt"]),
    )


def event_to_record(e: ActivityEvent) -> dict[str, Any]:
    return {"actor": e.actor, "kind": e.kind.value, "target": e.target, "at": _format_instant(e.at)}


def event_from_record(d: dict[str, Any]) -> ActivityEvent:
    return ActivityEvent(
        actor=d["actor"], kind=ActivityKind(d["kind"]), target=d["target"], at=_parse_instant(d["at"])
    )


class _Transaction:
    def __init__(self, op: str):
        self.op = op
        self.journal: list[tuple[dict, Any, Any]] = []
        self.activity_marks: dict[str, int] = {}
        self.touched: set[tuple[str, Any]] = set()
        self.reindex: set[str] = set()
        self.unindex: set[str] = set()


class CurationStore:
    def __init__(self, clock: Optional[Callable[[], datetime]] = None):
        self.groups: dict[str, Group] = {}
        self.resources: dict[str, Resource] = {}
        self.resource_home: dict[str, str] = {}
        self.activity: dict[str, list[ActivityEvent]] = {}
        self.receipts: dict[str, ArchiveRequestReceipt] = {}
        self.annotations: dict[str, Any] = {}  # "resourceId|groupId" -> CrawlAnnotation
        self.collections: dict[str, dict[str, str]] = {}  # collectionId -> {groupId, collectorName}
        self.clock = clock or (lambda: datetime.now(timezone.utc))
        self._lock = threading.RLock()
        self._txn: Optional[_Transaction] = None

    # -- transactions ------------------------------------------------------

    @contextmanager
    def transaction(self, op: str = ""):
        """Run mutations atomically; rolls back on any exception.

        Nested calls join the outermost transaction.
        """
        with self._lock:
            if self._txn is not None:
                yield self._txn
                return
            txn = _Transaction(op)
            self._txn = txn
            try:
                yield txn
            except BaseException:
                self._rollback(txn)
                raise
            finally:
                self._txn = None

    def _rollback(self, txn: _Transaction) -> None:
        for mapping, key, old in reversed(txn.journal):
            if old is MISSING:
                mapping.pop(key, None)
            else:
                mapping[key] = old
        for gid, mark in txn.activity_marks.items():
            events = self.activity.get(gid)
            if events is not None:
                del events[mark:]

    def _require_txn(self) -> _Transaction:
        if self._txn is None:
            raise RuntimeError("mutation outside transaction")
        return self._txn

    def _set(self, map_name: str, key: Any, value: Any) -> None:
        txn = self._require_txn()
        mapping = getattr(self, map_name)
        if (map_name, key) not in txn.touched:
            txn.journal.append((mapping, key, mapping.get(key, MISSING)))
            txn.touched.add((map_name, key))
        mapping[key] = value

    def _delete(self, map_name: str, key: Any) -> None:
        txn = self._require_txn()
        mapping = getattr(self, map_name)
        if (map_name, key) not in txn.touched:
            txn.journal.append((mapping, key, mapping.get(key, MISSING)))
            txn.touched.add((map_name, key))
        mapping.pop(key, None)

    def changeset(self, txn: _Transaction) -> dict[str, Any]:
        """Serialize everything the transaction touched, for the event log."""
        changes: dict[str, Any] = {"op": txn.op}
        groups, resources, removed = {}, {}, []
        receipts, annotations, collections = {}, {}, {}
        for map_name, key in sorted(txn.touched, key=str):
            if map_name == "groups":
                groups[key] = group_to_record(self.groups[key])
            elif map_name in ("resources", "resource_home"):
                if key in self.resources:
                    resources[key] = {
                        "record": resource_to_record(self.resources[key]),
                        "home": self.resource_home[key],
                    }
                elif key not in removed:
                    removed.append(key)
            elif map_name == "receipts":
                receipts[key] = receipt_to_record(self.receipts[key])
            elif map_name == "annotations":
                ann = self.annotations.get(key)
                annotations[key] = None if ann is None else ann.to_record()
            elif map_name == "collections":
                collections[key] = self.collections[key]
        activity = [
            [gid, event_to_record(e)]
            for gid, mark in sorted(txn.activity_marks.items())
            for e in self.activity[gid][mark:]
        ]
        for name, value in (
            ("groups", groups),
            ("resources", resources),
            ("resourcesRemoved", removed),
            ("activity", activity),
            ("receipts", receipts),
            ("annotations", annotations),
            ("collections", collections),
        ):
            if value:
                changes[name] = value
        return changes

    def apply_changes(self, changes: dict[str, Any]) -> None:
        """Apply a logged change set directly (event-log replay path)."""
        from .enrichment import CrawlAnnotation

        for gid, rec in changes.get("groups", {}).items():
            self.groups[gid] = group_from_record(rec)
            self.activity.setdefault(gid, [])
        for rid, entry in changes.get("resources", {}).items():
            self.resources[rid] = resource_from_record(entry["record"])
            self.resource_home[rid] = entry["home"]
        for rid in changes.get("resourcesRemoved", []):
            self.resources.pop(rid, None)
            self.resource_home.pop(rid, None)
        for gid, rec in changes.get("activity", []):
            self.activity.setdefault(gid, []).append(event_from_record(rec))
        for rid, rec in changes.get("receipts", {}).items():
            self.receipts[rid] = receipt_from_record(rec)
        for key, rec in changes.get("annotations", {}).items():
            if rec is None:
                self.annotations.pop(key, None)
            else:
                self.annotations[key] = CrawlAnnotation.from_record(rec)
        for cid, rec in changes.get("collections", {}).items():
            self.collections[cid] = rec

    @contextmanager
    def _op(self, name: str):
        # Public mutating entry point: auto-commits when used standalone,
        # joins the surrounding transaction when the service drives it.
        with self.transaction(name) as txn:
            yield txn

    # -- primitives (used by ingest/enrichment modules too) ----------------

    def new_id(self, prefix: str) -> str:
        return f"{prefix}{uuid.uuid4().hex[:12]}"

    def now(self) -> datetime:
        return self.clock()

    def put_group(self, group: Group) -> None:
        self._set("groups", group.id, group)
        if group.id not in self.activity:
            self.activity[group.id] = []

    def put_resource(self, resource: Resource, home_group_id: str) -> None:
        self._set("resources", resource.id, resource)
        self._set("resource_home", resource.id, home_group_id)
        self._require_txn().reindex.add(resource.id)

    def update_resource(self, resource: Resource) -> None:
        if resource.id not in self.resources:
            raise NotFound(f"unknown resource {resource.id}")
        self._set("resources", resource.id, resource)
        self._require_txn().reindex.add(resource.id)

    def log_event(self, group_id: str, kind: ActivityKind, actor: str, target: str) -> None:
        txn = self._require_txn()
        events = self.activity.setdefault(group_id, [])
        if group_id not in txn.activity_marks:
            txn.activity_marks[group_id] = len(events)
        at = self.now()
        if events and events[-1].at > at:
            at = events[-1].at  # keep per-group event times non-decreasing
        events.append(ActivityEvent(actor=actor, kind=kind, target=target, at=at))

    def register_collection(self, collection_id: str, group_id: str, collector_name: str) -> None:
        self._set(
            "collections",
            collection_id,
            {"groupId": group_id, "collectorName": collector_name},
        )

    def set_receipt(self, resource_id: str, receipt: ArchiveRequestReceipt) -> None:
        self._set("receipts", resource_id, receipt)

    def set_annotation(self, resource_id: str, group_id: str, annotation: Any) -> None:
        self._set("annotations", f"{resource_id}|{group_id}", annotation)

    def get_annotation(self, resource_id: str, group_id: str) -> Any:
        with self._lock:
            return self.annotations.get(f"{resource_id}|{group_id}")

    def _collector_of(self, group_id: str) -> str:
        for entry in self.collections.values():
            if entry["groupId"] == group_id:
                return entry["collectorName"]
        return ""

    def set_thumbnail(self, resource_id: str, thumbnail: Thumbnail) -> None:
        """System-level update of derived liveness state.

        Applies to imported groups too: the dead-page placeholder is
        not curator metadata, so it is excluded from snapshot hashes.
        """
        resource = self.require_resource(resource_id)
        self._set("resources", resource_id, replace(resource, thumbnail=thumbnail))

    # -- reads --------------------------------------------------------------
    #
    # Readers take the same re-entrant lock mutations hold for their whole
    # transaction, so every accessor returns committed state only.

    @property
    def lock(self) -> threading.RLock:
        return self._lock

    def require_group(self, group_id: str) -> Group:
        with self._lock:
            group = self.groups.get(group_id)
        if group is None:
            raise NotFound(f"unknown group {group_id}")
        return group

    def require_resource(self, resource_id: str) -> Resource:
        with self._lock:
            resource = self.resources.get(resource_id)
        if resource is None:
            raise NotFound(f"unknown resource {resource_id}")
        return resource

    def home_of(self, resource_id: str) -> str:
        with self._lock:
            home = self.resource_home.get(resource_id)
        if home is None:
            raise NotFound(f"unknown resource {resource_id}")
        return home

    def resources_of(self, group_id: str) -> list[Resource]:
        with self._lock:
            group = self.require_group(group_id)
            return [self.resources[rid] for rid in group.resource_ids]

    def subgroups_of(self, group_id: str) -> list[Group]:
        with self._lock:
            return sorted(
                (g for g in self.groups.values() if g.parent_id == group_id),
                key=lambda g: (g.title, g.id),
            )

    def group_snapshot_hash(self, group_id: str) -> str:
        """Hash of everything curators may not change on a read-only group.

        Covers title/description/flags and the ordered resource records;
        excludes membership, activity, and thumbnail state, which stay
        live even on imported groups.
        """
        with self._lock:
            group = self.require_group(group_id)
            payload = {
                "title": group.title,
                "description": group.description,
                "readOnly": group.read_only,
                "parentId": group.parent_id,
                "resources": [],
            }
            for rid in group.resource_ids:
                record = resource_to_record(self.resources[rid])
                del record["thumbnail"]
                payload["resources"].append(record)
            blob = json.dumps(payload, sort_keys=True, separators=(",", ":"))
            return hashlib.sha256(blob.encode("utf-8")).hexdigest()

    # -- membership checks ---------------------------------------------------

    def require_member(self, group: Group, user_id: str) -> None:
        if not group.is_member(user_id):
            raise NotMember(f"{user_id} is not a member of group {group.id}")

    def require_editable(self, group: Group) -> None:
        if group.read_only:
            raise ReadOnlyViolation(f"group {group.id} is read-only")

    # -- group lifecycle ------------------------------------------------------

    def create_group(
        self,
        owner: str,
        title: str,
        description: str = "",
        *,
        read_only: bool = False,
        parent_id: Optional[str] = None,
    ) -> str:
        if not title.strip():
            raise ValidationError("group title must be non-empty")
        with self._op("create_group"):
            gid = self.new_id("g")
            group = Group(
                id=gid,
                title=title,
                description=description,
                read_only=read_only,
                parent_id=parent_id,
                members=(Member(owner, Role.OWNER),),
                resource_ids=(),
                created_by=owner,
                created_at=self.now(),
            )
            self.put_group(group)
            self.log_event(gid, ActivityKind.GROUP_CREATED, owner, gid)
            return gid

    def create_subgroup(self, parent_id: str, owner: str, title: str, description: str = "") -> str:
        with self._op("create_subgroup"):
            parent = self.require_group(parent_id)
            self.require_editable(parent)
            if parent.parent_id is not None:
                raise DepthExceeded("sub-groups cannot be nested below one level")
            return self.create_group(owner, title, description, parent_id=parent_id)

    def join_group(self, group_id: str, user_id: str) -> None:
        """Joining is open to everyone, read-only groups included."""
        with self._op("join_group"):
            group = self.require_group(group_id)
            if group.is_member(user_id):
                return
            self.put_group(replace(group, members=group.members + (Member(user_id, Role.MEMBER),)))
            self.log_event(group_id, ActivityKind.MEMBER_JOINED, user_id, user_id)

    def leave_group(self, group_id: str, user_id: str) -> None:
        with self._op("leave_group"):
            group = self.require_group(group_id)
            if not group.is_member(user_id):
                return
            members = tuple(m for m in group.members if m.user_id != user_id)
            self.put_group(replace(group, members=members))
            self.log_event(group_id, ActivityKind.MEMBER_LEFT, user_id, user_id)

    # -- resource membership ---------------------------------------------------

    def _urls_in(self, group: Group) -> set[str]:
        return {str(self.resources[rid].url) for rid in group.resource_ids}

    def _attach(self, group: Group, resource: Resource) -> None:
        self.put_resource(resource, group.id)
        self.put_group(replace(group, resource_ids=group.resource_ids + (resource.id,)))

    def _materialize(self, draft: ResourceDraft, actor: str) -> Resource:
        url = normalize_url(draft.original_url)
        tags = frozenset(normalize_tag(t) for t in draft.tags)
        if draft.source is None:
            raise ValidationError("resource draft needs provenance")
        return Resource(
            id=self.new_id("r"),
            url=url,
            original_url=draft.original_url,
            title=draft.title,
            description=draft.description,
            author=draft.author,
            media_type=draft.media_type,
            source=draft.source,
            tags=tags,
            comments=(),
            custom_fields=dict(draft.custom_fields or {}),
            thumbnail=draft.thumbnail,
            created_by=actor,
            created_at=self.now(),
        )

    def add_resource(self, group_id: str, draft: ResourceDraft, actor: str) -> str:
        """Add a new resource (live-web copy or upload) to an editable group."""
        with self._op("add_resource"):
            group = self.require_group(group_id)
            self.require_editable(group)
            self.require_member(group, actor)
            resource = self._materialize(draft, actor)
            if str(resource.url) in self._urls_in(group):
                raise DuplicateInGroup(f"group {group_id} already holds {resource.url}")
            self._attach(group, resource)
            self.log_event(group_id, ActivityKind.RESOURCE_ADDED, actor, resource.id)
            return resource.id

    def _copy_of(self, source: Resource, actor: str) -> Resource:
        # Fresh identity; tags, metadata and provenance travel with the
        # copy, comments and receipts do not.
        return replace(
            source,
            id=self.new_id("r"),
            comments=(),
            custom_fields=dict(source.custom_fields),
            created_by=actor,
            created_at=self.now(),
        )

    def copy_resource(self, group_id: str, source_resource_id: str, actor: str) -> str:
        """Copy an existing resource (typically from a read-only group)."""
        with self._op("copy_resource"):
            group = self.require_group(group_id)
            self.require_editable(group)
            self.require_member(group, actor)
            source = self.require_resource(source_resource_id)
            if str(source.url) in self._urls_in(group):
                raise DuplicateInGroup(f"group {group_id} already holds {source.url}")
            resource = self._copy_of(source, actor)
            self._attach(group, resource)
            self.log_event(group_id, ActivityKind.RESOURCE_ADDED, actor, resource.id)
            return resource.id

    def move_resource(self, resource_id: str, from_group_id: str, to_group_id: str, actor: str) -> None:
        """Atomic remove+add; on any error the source group is unchanged."""
        with self._op("move_resource"):
            source_group = self.require_group(from_group_id)
            target_group = self.require_group(to_group_id)
            self.require_editable(source_group)
            self.require_editable(target_group)
            self.require_member(source_group, actor)
            self.require_member(target_group, actor)
            resource = self.require_resource(resource_id)
            if resource_id not in source_group.resource_ids:
                raise NotFound(f"resource {resource_id} is not in group {from_group_id}")
            if from_group_id == to_group_id:
                return
            if str(resource.url) in self._urls_in(target_group):
                raise DuplicateInGroup(f"group {to_group_id} already holds {resource.url}")
            self.put_group(
                replace(
                    source_group,
                    resource_ids=tuple(r for r in source_group.resource_ids if r != resource_id),
                )
            )
            self.put_group(
                replace(target_group, resource_ids=target_group.resource_ids + (resource_id,))
            )
            self._set("resource_home", resource_id, to_group_id)
            self._require_txn().reindex.add(resource_id)
            self.log_event(from_group_id, ActivityKind.RESOURCE_MOVED, actor, resource_id)
            self.log_event(to_group_id, ActivityKind.RESOURCE_MOVED, actor, resource_id)

    def remove_resource(self, resource_id: str, actor: str) -> None:
        with self._op("remove_resource"):
            resource = self.require_resource(resource_id)
            group = self.require_group(self.home_of(resource_id))
            self.require_editable(group)
            self.require_member(group, actor)
            self.put_group(
                replace(group, resource_ids=tuple(r for r in group.resource_ids if r != resource_id))
            )
            self._delete("resources", resource_id)
            self._delete("resource_home", resource_id)
            txn = self._require_txn()
            txn.reindex.discard(resource_id)
            txn.unindex.add(resource_id)
            self.log_event(group.id, ActivityKind.RESOURCE_DELETED, actor, resource_id)

    # -- whole-group operations -------------------------------------------------

    def copy_group(self, source_group_id: str, owner: str, new_title: str) -> str:
        """Deep copy with fresh resource ids; the source is untouched."""
        with self._op("copy_group"):
            source = self.require_group(source_group_id)
            gid = self.create_group(owner, new_title, source.description)
            group = self.require_group(gid)
            for rid in source.resource_ids:
                self._attach(group, self._copy_of(self.resources[rid], owner))
                group = self.require_group(gid)
            return gid

    def merge_groups(self, source_group_ids: list[str], owner: str, new_title: str) -> tuple[str, int]:
        """Union of the sources deduplicated by normalized URL.

        First occurrence in source-list order wins; returns the new
        group id and how many resources fell to deduplication.
        """
        if len(source_group_ids) < 2:
            raise ValidationError("merge needs at least two source groups")
        with self._op("merge_groups"):
            sources = [self.require_group(gid) for gid in source_group_ids]
            gid = self.create_group(owner, new_title)
            group = self.require_group(gid)
            seen: set[str] = set()
            total = 0
            for source in sources:
                for rid in source.resource_ids:
                    total += 1
                    resource = self.resources[rid]
                    if str(resource.url) in seen:
                        continue
                    seen.add(str(resource.url))
                    self._attach(group, self._copy_of(resource, owner))
                    group = self.require_group(gid)
            return gid, total - len(group.resource_ids)

    def bulk_tag(self, resource_ids: Iterable[str], label: str, actor: str) -> BulkTagReport:
        """Apply one tag to many resources; partial failure, never all-or-nothing."""
        tag = normalize_tag(label)
        applied = 0
        errors: list[ItemError] = []
        with self._op("bulk_tag"):
            for rid in resource_ids:
                try:
                    resource = self.require_resource(rid)
                    group = self.require_group(self.home_of(rid))
                    self.require_editable(group)
                    self.require_member(group, actor)
                except ServiceError as exc:
                    errors.append(ItemError(rid, exc.code, exc.message))
                    continue
                if tag not in resource.tags:
                    self.update_resource(resource.with_tags(resource.tags | {tag}))
                    self.log_event(group.id, ActivityKind.TAG_ADDED, actor, rid)
                applied += 1
        return BulkTagReport(applied_count=applied, errors=tuple(errors))

    def group_by_tag(self, label: str, owner: str, new_title: str) -> str:
        """Collect copies of every resource bearing the tag into a new group.

        Scans resources in id order; URL duplicates keep the first hit.
        """
        tag = normalize_tag(label)
        with self._op("group_by_tag"):
            gid = self.create_group(owner, new_title)
            group = self.require_group(gid)
            seen: set[str] = set()
            for rid in sorted(self.resources):
                resource = self.resources[rid]
                if tag not in resource.tags or str(resource.url) in seen:
                    continue
                seen.add(str(resource.url))
                self._attach(group, self._copy_of(resource, owner))
                group = self.require_group(gid)
            return gid

    # -- export / activity --------------------------------------------------------

    def export_group(self, group_id: str, fmt: ExportFormat, caller: str) -> bytes:
        with self._lock:
            group = self.require_group(group_id)
            self.require_member(group, caller)
            resources = self.resources_of(group_id)
            collector = self._collector_of(group_id)
        if fmt == ExportFormat.RECORD_LINES:
            lines = [json.dumps(resource_to_record(r), sort_keys=True) for r in resources]
            return ("\n".join(lines) + ("\n" if lines else "")).encode("utf-8")
        return ingest.dump_manifest(
            collection_id=f"export-{group_id}",
            title=group.title,
            description=group.description,
            collector_name=collector,
            resources=resources,
        )

    def activity_feed(self, group_id: str, caller: str, limit: int = 50) -> list[ActivityEvent]:
        if limit < 0:
            raise ValidationError("limit must be non-negative")
        with self._lock:
            group = self.require_group(group_id)
            self.require_member(group, caller)
            events = self.activity.get(group_id, [])
            return list(reversed(events))[:limit]
