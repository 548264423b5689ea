"""Collection manifests: parsing, serialization, and read-only import.

The interchange format is UTF-8 JSON lines.  The first line is a header
object (``collectionId``, ``title``, ``description``, ``collectorName``);
every following line is one seed object with ``url``, ``title``,
``description``, ``author``, ``subjects`` and optional ``firstCapture``
/ ``lastCapture`` 14-digit timestamps.  Unknown fields are ignored so
the format can grow additively.

Imported collections become read-only groups.  Seeds whose URL fails
normalization are skipped with a warning record instead of failing the
whole import; real seed lists are dirty.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, replace
from typing import Callable, Iterable, Optional

from .domain import (
    CapturePeriod,
    MediaType,
    Resource,
    SourceKind,
    SourceProvenance,
    Timestamp14,
    normalize_tag,
    normalize_url,
    parse_timestamp14,
)
from .errors import (
    BadTimestamp,
    DuplicateCollection,
    InvalidTag,
    MalformedUrl,
    ManifestSemantic,
    ManifestSyntax,
)

logger = logging.getLogger(__name__)

RejectCallback = Callable[[str, str], None]


@dataclass(frozen=True)
class SeedRecord:
    url: str
    title: str = ""
    description: str = ""
    author: str = ""
    subjects: tuple[str, ...] = ()
    first_capture: Optional[Timestamp14] = None
    last_capture: Optional[Timestamp14] = None


@dataclass(frozen=True)
class CollectionManifest:
    collection_id: str
    title: str
    description: str
    collector_name: str
    seeds: tuple[SeedRecord, ...]


@dataclass(frozen=True)
class CollectionSummary:
    group_id: str
    title: str
    description: str
    resource_count: int
    collector_name: str


def _parse_line(line: str, lineno: int) -> dict:
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise ManifestSyntax(f"line {lineno}: invalid JSON: {exc.msg}") from exc
    if not isinstance(obj, dict):
        raise ManifestSyntax(f"line {lineno}: expected a JSON object")
    return obj


def _seed_timestamp(obj: dict, key: str, lineno: int) -> Optional[Timestamp14]:
    raw = obj.get(key)
    if raw is None:
        return None
    try:
        return parse_timestamp14(raw)
    except BadTimestamp as exc:
        raise ManifestSemantic(f"line {lineno}: bad {key}: {exc.message}") from exc


def parse_manifest(data: bytes) -> CollectionManifest:
    """Parse manifest bytes into a structurally valid manifest.

    Raises :class:`ManifestSyntax` for undecodable or non-record input
    and :class:`ManifestSemantic` for missing required fields, bad
    timestamps, or an empty seed list.
    """
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ManifestSyntax(f"manifest is not UTF-8: {exc}") from exc
    lines = [(i + 1, line) for i, line in enumerate(text.split("\n")) if line.strip()]
    if not lines:
        raise ManifestSyntax("manifest is empty")

    header_lineno, header_line = lines[0]
    header = _parse_line(header_line, header_lineno)
    collection_id = header.get("collectionId")
    title = header.get("title")
    if not collection_id or not isinstance(collection_id, str):
        raise ManifestSemantic("header is missing collectionId")
    if not title or not isinstance(title, str):
        raise ManifestSemantic("header is missing title")

    seeds = []
    for lineno, line in lines[1:]:
        obj = _parse_line(line, lineno)
        url = obj.get("url")
        if not url or not isinstance(url, str):
            raise ManifestSemantic(f"line {lineno}: seed is missing url")
        first = _seed_timestamp(obj, "firstCapture", lineno)
        last = _seed_timestamp(obj, "lastCapture", lineno)
        if first is not None and last is not None and first > last:
            raise ManifestSemantic(f"line {lineno}: firstCapture after lastCapture")
        subjects = obj.get("subjects") or []
        if not isinstance(subjects, list) or not all(isinstance(s, str) for s in subjects):
            raise ManifestSemantic(f"line {lineno}: subjects must be a list of strings")
        seeds.append(
            SeedRecord(
                url=url,
                title=obj.get("title") or "",
                description=obj.get("description") or "",
                author=obj.get("author") or "",
                subjects=tuple(subjects),
                first_capture=first,
                last_capture=last,
            )
        )
    if not seeds:
        raise ManifestSemantic("manifest has no seeds")
    return CollectionManifest(
        collection_id=collection_id,
        title=title,
        description=header.get("description") or "",
        collector_name=header.get("collectorName") or "",
        seeds=tuple(seeds),
    )


def dump_manifest(
    collection_id: str,
    title: str,
    description: str,
    collector_name: str,
    resources: Iterable[Resource],
) -> bytes:
    """Serialize resources back into the manifest format (re-importable)."""
    header = {
        "collectionId": collection_id,
        "title": title,
        "description": description,
        "collectorName": collector_name,
    }
    lines = [json.dumps(header, sort_keys=True, ensure_ascii=False)]
    for r in resources:
        seed = {
            "url": r.original_url,
            "title": r.title,
            "description": r.description,
            "author": r.author,
            "subjects": sorted(r.tags),
        }
        if r.source.capture_period is not None:
            seed["firstCapture"] = r.source.capture_period.first_capture.value
            seed["lastCapture"] = r.source.capture_period.last_capture.value
        lines.append(json.dumps(seed, sort_keys=True, ensure_ascii=False))
    return ("\n".join(lines) + "\n").encode("utf-8")


def _seed_tags(subjects: Iterable[str]) -> frozenset[str]:
    tags = set()
    for subject in subjects:
        try:
            tags.add(normalize_tag(subject))
        except InvalidTag:
            continue  # dirty subject metadata is dropped, not fatal
    return frozenset(tags)


def _seed_period(seed: SeedRecord) -> Optional[CapturePeriod]:
    if seed.first_capture is None and seed.last_capture is None:
        return None
    first = seed.first_capture or seed.last_capture
    last = seed.last_capture or seed.first_capture
    return CapturePeriod(first_capture=first, last_capture=last)


def import_collection(store, manifest: CollectionManifest, actor: str, on_reject: Optional[RejectCallback] = None) -> str:
    """Import a manifest as a read-only group; returns the new group id.

    Seeds that fail URL normalization (or collide with an already
    imported seed URL) are reported through ``on_reject`` and skipped.
    Raises :class:`DuplicateCollection` when the collection id was
    imported before.
    """
    if on_reject is None:
        on_reject = lambda url, reason: logger.warning("seed skipped: %s (%s)", url, reason)
    if manifest.collection_id in store.collections:
        raise DuplicateCollection(f"collection {manifest.collection_id} already imported")
    with store.transaction("import_collection"):
        gid = store.create_group(
            actor, manifest.title, manifest.description, read_only=True
        )
        group = store.require_group(gid)
        seen_urls: set[str] = set()
        resource_ids = []
        for seed in manifest.seeds:
            try:
                url = normalize_url(seed.url)
            except MalformedUrl as exc:
                on_reject(seed.url, exc.message)
                continue
            if str(url) in seen_urls:
                on_reject(seed.url, "duplicate of an earlier seed URL")
                continue
            seen_urls.add(str(url))
            resource = Resource(
                id=store.new_id("r"),
                url=url,
                original_url=seed.url,
                title=seed.title,
                description=seed.description,
                author=seed.author,
                media_type=MediaType.WEBPAGE,
                source=SourceProvenance(
                    kind=SourceKind.ARCHIVE_COLLECTION,
                    collection_id=manifest.collection_id,
                    collector_name=manifest.collector_name,
                    capture_period=_seed_period(seed),
                ),
                tags=_seed_tags(seed.subjects),
                created_by=actor,
                created_at=store.now(),
            )
            store.put_resource(resource, gid)
            resource_ids.append(resource.id)
        store.put_group(replace(group, resource_ids=tuple(resource_ids)))
        store.register_collection(manifest.collection_id, gid, manifest.collector_name)
        return gid


def list_collections(store) -> list[CollectionSummary]:
    """Imported collections ordered by title (ties broken by group id)."""
    summaries = []
    with store.lock:
        for entry in store.collections.values():
            group = store.require_group(entry["groupId"])
            summaries.append(
                CollectionSummary(
                    group_id=group.id,
                    title=group.title,
                    description=group.description,
                    resource_count=len(group.resource_ids),
                    collector_name=entry["collectorName"],
                )
            )
    return sorted(summaries, key=lambda s: (s.title, s.group_id))
