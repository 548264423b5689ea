"""Resource enrichment: tags, comments, metadata edits, crawl annotations.

All operations are scoped to the resource's home group: the group must
be editable and the actor a member.  Copies of read-only resources live
in editable groups, so enriching a copy never touches the original.
Every successful enrichment re-indexes the resource.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from typing import Optional

from .curation import ActivityKind, CurationStore
from .domain import Comment, Resource, normalize_tag
from .errors import EmptyBody, ValidationError


class CrawlFrequency(str, Enum):
    ONCE = "once"
    DAILY = "daily"
    WEEKLY = "weekly"
    MONTHLY = "monthly"
    QUARTERLY = "quarterly"
    ANNUAL = "annual"


class CrawlDepth(str, Enum):
    PAGE_ONLY = "pageOnly"
    SITE = "site"


@dataclass(frozen=True)
class CrawlAnnotation:
    """Curator guidance on how often and how deeply to re-archive a seed.

    At most one per (resource, group); setting again replaces it.
    """

    frequency: CrawlFrequency
    depth: CrawlDepth
    rationale: str = ""

    def to_record(self) -> dict:
        return {"frequency": self.frequency.value, "depth": self.depth.value, "rationale": self.rationale}

    @classmethod
    def from_record(cls, d: dict) -> "CrawlAnnotation":
        return cls(
            frequency=CrawlFrequency(d["frequency"]),
            depth=CrawlDepth(d["depth"]),
            rationale=d.get("rationale", ""),
        )


@dataclass(frozen=True)
class MetadataPatch:
    """Partial update; None leaves a field untouched.  ``custom_fields``
    entries are upserted into the existing map."""

    title: Optional[str] = None
    description: Optional[str] = None
    author: Optional[str] = None
    custom_fields: Optional[dict[str, str]] = None

    def is_empty(self) -> bool:
        return (
            self.title is None
            and self.description is None
            and self.author is None
            and not self.custom_fields
        )


def _editable_home(store: CurationStore, resource: Resource, actor: str):
    group = store.require_group(store.home_of(resource.id))
    store.require_editable(group)
    store.require_member(group, actor)
    return group


def add_tag(store: CurationStore, resource_id: str, label: str, actor: str) -> None:
    """Idempotent: adding a tag that is already present is a no-op."""
    tag = normalize_tag(label)
    with store.transaction("add_tag"):
        resource = store.require_resource(resource_id)
        group = _editable_home(store, resource, actor)
        if tag in resource.tags:
            return
        store.update_resource(resource.with_tags(resource.tags | {tag}))
        store.log_event(group.id, ActivityKind.TAG_ADDED, actor, resource_id)


def remove_tag(store: CurationStore, resource_id: str, label: str, actor: str) -> None:
    """Removing an absent tag succeeds silently.  Logged as a resource
    edit (the activity vocabulary has no removal kind)."""
    tag = normalize_tag(label)
    with store.transaction("remove_tag"):
        resource = store.require_resource(resource_id)
        group = _editable_home(store, resource, actor)
        if tag not in resource.tags:
            return
        store.update_resource(resource.with_tags(resource.tags - {tag}))
        store.log_event(group.id, ActivityKind.RESOURCE_EDITED, actor, resource_id)


def add_comment(store: CurationStore, resource_id: str, body: str, actor: str) -> str:
    """Append an immutable comment; returns its id."""
    if not body or not body.strip():
        raise EmptyBody("comment body must be non-empty")
    with store.transaction("add_comment"):
        resource = store.require_resource(resource_id)
        group = _editable_home(store, resource, actor)
        at = store.now()
        if resource.comments and resource.comments[-1].created_at > at:
            at = resource.comments[-1].created_at  # keep creation order total
        comment = Comment(id=store.new_id("c"), author=actor, body=body, created_at=at)
        store.update_resource(replace(resource, comments=resource.comments + (comment,)))
        store.log_event(group.id, ActivityKind.COMMENT_ADDED, actor, resource_id)
        return comment.id


def edit_metadata(store: CurationStore, resource_id: str, patch: MetadataPatch, actor: str) -> None:
    """Change exactly the patched fields, nothing else."""
    with store.transaction("edit_metadata"):
        resource = store.require_resource(resource_id)
        group = _editable_home(store, resource, actor)
        if patch.is_empty():
            return
        updated = resource
        if patch.title is not None:
            updated = replace(updated, title=patch.title)
        if patch.description is not None:
            updated = replace(updated, description=patch.description)
        if patch.author is not None:
            updated = replace(updated, author=patch.author)
        if patch.custom_fields:
            merged = dict(resource.custom_fields)
            merged.update(patch.custom_fields)
            updated = replace(updated, custom_fields=merged)
        store.update_resource(updated)
        store.log_event(group.id, ActivityKind.RESOURCE_EDITED, actor, resource_id)


def set_crawl_annotation(
    store: CurationStore,
    resource_id: str,
    group_id: str,
    annotation: CrawlAnnotation,
    actor: str,
) -> None:
    """Upsert the single crawl annotation for (resource, group)."""
    with store.transaction("set_crawl_annotation"):
        resource = store.require_resource(resource_id)
        group = store.require_group(group_id)
        store.require_editable(group)
        store.require_member(group, actor)
        if resource.id not in group.resource_ids:
            raise ValidationError(f"resource {resource_id} is not in group {group_id}")
        store.set_annotation(resource_id, group_id, annotation)
        store.log_event(group_id, ActivityKind.RESOURCE_EDITED, actor, resource_id)
