"""Keyword search over resource metadata with facets and scoping.

The index is an in-memory inverted index over the title, description,
author and tag fields.  Ranking is BM25 (k1=1.2, b=0.75) over a weighted
field combination: title x3, tags x2, description x1, author x1.  With
per-document weighted term frequency ``tf`` and weighted length ``dl``:

    idf(t)   = ln(1 + (N - df + 0.5) / (df + 0.5))
    score(d) = sum over query terms of
               idf(t) * tf * (k1 + 1) / (tf + k1 * (1 - b + b * dl / avgdl))

Query keywords are AND-combined: a hit must contain every query token in
some indexed field (title only, when the scope says so).  Ties are broken
by capture recency, then resource id, so results are deterministic.

Facet dimension values are normalized once at index time (trimmed and
case-folded, except group ids and the media type enum); constraints are
normalized the same way before matching, and facet counts are keyed by
the normalized values.

The index is rebuilt from the persistent store at startup and never
persisted itself.
"""

from __future__ import annotations

import math
import re
import threading
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .domain import Resource, Timestamp14
from .errors import BadQuery, ValidationError

BM25_K1 = 1.2
BM25_B = 0.75

FIELD_WEIGHTS = {"title": 3.0, "tags": 2.0, "description": 1.0, "author": 1.0}

FACET_DIMENSIONS = ("author", "tags", "group", "service", "collector", "mediaType")

MAX_PAGE_SIZE = 100

_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)


def tokenize(text: str) -> list[str]:
    """Lowercased Unicode-alphanumeric runs; deterministic."""
    return _TOKEN_RE.findall(text.casefold())


def _normalize_facet_value(dimension: str, value: str) -> str:
    if dimension in ("group", "mediaType"):
        return value.strip()
    return value.strip().casefold()


@dataclass(frozen=True)
class FacetConstraint:
    dimension: str
    value: str

    def __post_init__(self):
        if self.dimension not in FACET_DIMENSIONS:
            raise ValidationError(f"unknown facet dimension {self.dimension!r}")


@dataclass(frozen=True)
class QueryScope:
    """Conjunctive restrictions: collection set, host suffix, path
    prefix, title-only matching."""

    collections: Optional[frozenset[str]] = None
    domain: Optional[str] = None
    path_prefix: Optional[str] = None
    title_only: bool = False

    def is_empty(self) -> bool:
        return self.collections is None and self.domain is None and self.path_prefix is None


@dataclass(frozen=True)
class SearchQuery:
    keywords: str = ""
    facets: frozenset[FacetConstraint] = frozenset()
    scope: QueryScope = QueryScope()
    page: int = 1
    page_size: int = 12


@dataclass(frozen=True)
class CaptureSummary:
    first_capture: Timestamp14
    last_capture: Timestamp14
    capture_count: Optional[int] = None


@dataclass(frozen=True)
class SearchHit:
    resource_id: str
    score: float
    source_badge: str
    capture_summary: Optional[CaptureSummary] = None


@dataclass(frozen=True)
class SearchResult:
    hits: tuple[SearchHit, ...]
    facet_counts: dict[str, dict[str, int]]
    total: int


@dataclass(frozen=True)
class IndexContext:
    """Store-derived labels the index cannot compute from a Resource alone."""

    group_id: str
    service: str
    badge: str


@dataclass
class _Doc:
    resource_id: str
    tf: dict[str, float]
    title_tokens: frozenset[str]
    weighted_len: float
    facets: dict[str, tuple[str, ...]]
    recency: str
    badge: str
    host: str
    path: str
    group_id: str
    capture_summary: Optional[CaptureSummary] = None


class SearchIndex:
    """Single-writer inverted index; reads and writes are atomic."""

    def __init__(self):
        self._docs: dict[str, _Doc] = {}
        self._postings: dict[str, set[str]] = {}
        self._title_postings: dict[str, set[str]] = {}
        self._total_len = 0.0
        self._lock = threading.RLock()

    def __len__(self) -> int:
        return len(self._docs)

    def index_resource(self, resource: Resource, ctx: IndexContext) -> None:
        """Add or refresh one resource.  Reindex is remove + add."""
        with self._lock:
            if resource.id in self._docs:
                self.remove(resource.id)
            fields = {
                "title": tokenize(resource.title),
                "tags": tokenize(" ".join(sorted(resource.tags))),
                "description": tokenize(resource.description),
                "author": tokenize(resource.author),
            }
            tf: dict[str, float] = {}
            weighted_len = 0.0
            for name, tokens in fields.items():
                weight = FIELD_WEIGHTS[name]
                weighted_len += weight * len(tokens)
                for token in tokens:
                    tf[token] = tf.get(token, 0.0) + weight
            period = resource.source.capture_period
            doc = _Doc(
                resource_id=resource.id,
                tf=tf,
                title_tokens=frozenset(fields["title"]),
                weighted_len=weighted_len,
                facets={
                    "author": (_normalize_facet_value("author", resource.author),)
                    if resource.author.strip()
                    else (),
                    "tags": tuple(sorted(resource.tags)),
                    "group": (ctx.group_id,),
                    "service": (_normalize_facet_value("service", ctx.service),),
                    "collector": (_normalize_facet_value("collector", resource.source.collector_name),)
                    if resource.source.collector_name.strip()
                    else (),
                    "mediaType": (resource.media_type.value,),
                },
                recency=period.last_capture.value if period else "",
                badge=ctx.badge,
                host=resource.url.host,
                path=resource.url.path,
                group_id=ctx.group_id,
                capture_summary=CaptureSummary(period.first_capture, period.last_capture)
                if period
                else None,
            )
            self._docs[resource.id] = doc
            self._total_len += weighted_len
            for token in tf:
                self._postings.setdefault(token, set()).add(resource.id)
            for token in doc.title_tokens:
                self._title_postings.setdefault(token, set()).add(resource.id)

    def remove(self, resource_id: str) -> None:
        with self._lock:
            doc = self._docs.pop(resource_id, None)
            if doc is None:
                return
            self._total_len -= doc.weighted_len
            for token in doc.tf:
                bucket = self._postings.get(token)
                if bucket is not None:
                    bucket.discard(resource_id)
                    if not bucket:
                        del self._postings[token]
            for token in doc.title_tokens:
                bucket = self._title_postings.get(token)
                if bucket is not None:
                    bucket.discard(resource_id)
                    if not bucket:
                        del self._title_postings[token]

    # -- querying -----------------------------------------------------------

    def _candidates(self, tokens: list[str], title_only: bool) -> set[str]:
        if not tokens:
            return set(self._docs)
        postings = self._title_postings if title_only else self._postings
        buckets = []
        for token in set(tokens):
            bucket = postings.get(token)
            if not bucket:
                return set()
            buckets.append(bucket)
        buckets.sort(key=len)
        result = set(buckets[0])
        for bucket in buckets[1:]:
            result &= bucket
        return result

    def _matches(self, doc: _Doc, facets: Iterable[FacetConstraint], scope: QueryScope) -> bool:
        for constraint in facets:
            wanted = _normalize_facet_value(constraint.dimension, constraint.value)
            if wanted not in doc.facets[constraint.dimension]:
                return False
        if scope.collections is not None and doc.group_id not in scope.collections:
            return False
        if scope.domain is not None:
            suffix = scope.domain.strip().lower().lstrip(".")
            if doc.host != suffix and not doc.host.endswith("." + suffix):
                return False
        if scope.path_prefix is not None and not doc.path.startswith(scope.path_prefix):
            return False
        return True

    def _score(self, doc: _Doc, tokens: set[str], avgdl: float) -> float:
        n = len(self._docs)
        score = 0.0
        for token in tokens:
            tf = doc.tf.get(token, 0.0)
            if tf == 0.0:
                continue
            df = len(self._postings.get(token, ()))
            idf = math.log(1.0 + (n - df + 0.5) / (df + 0.5))
            denom = tf + BM25_K1 * (1.0 - BM25_B + BM25_B * doc.weighted_len / avgdl)
            score += idf * tf * (BM25_K1 + 1.0) / denom
        return score

    def facet_counts(self, docs: Iterable[_Doc]) -> dict[str, dict[str, int]]:
        """Brute-force value tallies per dimension over a filtered set."""
        counts: dict[str, dict[str, int]] = {dim: {} for dim in FACET_DIMENSIONS}
        for doc in docs:
            for dimension, values in doc.facets.items():
                bucket = counts[dimension]
                for value in values:
                    bucket[value] = bucket.get(value, 0) + 1
        return counts

    def _filtered_docs(self, query: SearchQuery, tokens: list[str]) -> list[_Doc]:
        candidates = self._candidates(tokens, query.scope.title_only)
        return [
            self._docs[rid]
            for rid in candidates
            if self._matches(self._docs[rid], query.facets, query.scope)
        ]

    def matching_ids(self, query: SearchQuery) -> set[str]:
        """The full filtered set, unranked and unpaginated.

        This is the selection core behind bulk select-by-search flows;
        ``search`` ranks and pages the same set.
        """
        tokens = tokenize(query.keywords)
        with self._lock:
            return {doc.resource_id for doc in self._filtered_docs(query, tokens)}

    def search(self, query: SearchQuery) -> SearchResult:
        if query.page < 1:
            raise ValidationError("page must be positive")
        if not 1 <= query.page_size <= MAX_PAGE_SIZE:
            raise ValidationError(f"pageSize must be within [1, {MAX_PAGE_SIZE}]")
        tokens = tokenize(query.keywords)
        if not tokens and not query.facets and query.scope.is_empty():
            raise BadQuery("query needs keywords, facets, or a scope restriction")
        with self._lock:
            filtered = self._filtered_docs(query, tokens)
            facet_counts = self.facet_counts(filtered)
            avgdl = (self._total_len / len(self._docs)) if self._docs else 1.0
            token_set = set(tokens)
            scores = {doc.resource_id: self._score(doc, token_set, avgdl or 1.0) for doc in filtered}
            filtered.sort(key=lambda d: d.resource_id)
            filtered.sort(key=lambda d: d.recency, reverse=True)
            filtered.sort(key=lambda d: scores[d.resource_id], reverse=True)
            start = (query.page - 1) * query.page_size
            page = filtered[start : start + query.page_size]
            hits = tuple(
                SearchHit(
                    resource_id=doc.resource_id,
                    score=scores[doc.resource_id],
                    source_badge=doc.badge,
                    capture_summary=doc.capture_summary,
                )
                for doc in page
            )
            return SearchResult(hits=hits, facet_counts=facet_counts, total=len(filtered))
