"""Shared domain types: resources, provenance, URL and timestamp handling.

All types here are immutable value objects; they can be shared freely
between concurrent request handlers.  Mutation happens by building a new
value with :func:`dataclasses.replace`.

URL canonicalization is the deduplication key used when merging groups:
two raw URLs differing only in scheme/host case, default port, trailing
slash or fragment normalize to the same value.  Query strings are kept
verbatim because archived URLs are identity-sensitive to parameter order.
"""

from __future__ import annotations

import string
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from enum import Enum
from typing import Any, Optional
from urllib.parse import urlsplit

from .errors import BadTimestamp, EmptyBody, InvalidTag, MalformedUrl

DEAD_PAGE_PLACEHOLDER = "The page is no longer available on the web"

MAX_TAG_LENGTH = 64

_ALLOWED_SCHEMES = {"http", "https"}
_DEFAULT_PORTS = {"http": 80, "https": 443}
_UNRESERVED = set(string.ascii_letters + string.digits + "-._~")
_HEX = set(string.hexdigits)


class MediaType(str, Enum):
    WEBPAGE = "webpage"
    IMAGE = "image"
    VIDEO = "video"


class SourceKind(str, Enum):
    ARCHIVE_COLLECTION = "archiveCollection"
    LIVE_WEB = "liveWeb"
    UPLOAD = "upload"


class ThumbnailState(str, Enum):
    AVAILABLE = "available"
    DEAD_PAGE = "deadPage"
    PENDING = "pending"


@dataclass(frozen=True)
class NormalizedUrl:
    """Canonical URL form; ``str()`` yields the dedup key."""

    scheme: str
    host: str
    port: Optional[int]
    path: str
    query: str

    def __str__(self) -> str:
        host = f"[{self.host}]" if ":" in self.host else self.host
        netloc = host if self.port is None else f"{host}:{self.port}"
        q = f"?{self.query}" if self.query else ""
        return f"{self.scheme}://{netloc}{self.path}{q}"


def _normalize_percent_escapes(path: str) -> str:
    # Decode unreserved %XX escapes, uppercase the hex of the rest.
    out = []
    i = 0
    while i < len(path):
        ch = path[i]
        if ch == "%":
            hexpart = path[i + 1 : i + 3]
            if len(hexpart) != 2 or not set(hexpart) <= _HEX:
                raise MalformedUrl(f"invalid percent-escape at offset {i}")
            decoded = chr(int(hexpart, 16))
            if decoded in _UNRESERVED:
                out.append(decoded)
            else:
                out.append("%" + hexpart.upper())
            i += 3
        else:
            out.append(ch)
            i += 1
    return "".join(out)


def normalize_url(raw: str) -> NormalizedUrl:
    """Canonicalize ``raw`` into a :class:`NormalizedUrl`.

    Rules: scheme and host are lowercased; only http/https accepted;
    default ports dropped; fragments dropped; trailing slashes removed
    from non-root paths; percent-escapes in the path normalized
    (unreserved characters decoded, remaining hex uppercased); query
    preserved verbatim.  Deterministic and idempotent.

    Raises :class:`MalformedUrl` for anything unparseable, without a
    scheme, or with an unsupported scheme.
    """
    if not raw or not raw.strip():
        raise MalformedUrl("empty URL")
    raw = raw.strip()
    try:
        parts = urlsplit(raw)
    except ValueError as exc:
        raise MalformedUrl(f"unparseable URL: {exc}") from exc
    scheme = parts.scheme.lower()
    if scheme not in _ALLOWED_SCHEMES:
        raise MalformedUrl(f"unsupported scheme {parts.scheme!r}")
    host = parts.hostname
    if not host:
        raise MalformedUrl("missing host")
    host = host.lower()
    if any(c.isspace() for c in host):
        raise MalformedUrl("whitespace in host")
    try:
        port = parts.port
    except ValueError as exc:
        raise MalformedUrl(f"invalid port: {exc}") from exc
    if port == _DEFAULT_PORTS[scheme]:
        port = None
    path = _normalize_percent_escapes(parts.path) or "/"
    if path != "/":
        path = path.rstrip("/") or "/"
    if not path.startswith("/"):
        raise MalformedUrl("relative path in absolute URL")
    return NormalizedUrl(scheme=scheme, host=host, port=port, path=path, query=parts.query)


@dataclass(frozen=True, order=True)
class Timestamp14:
    """14-digit UTC capture timestamp (``yyyyMMddHHmmss``)."""

    value: str

    def to_datetime(self) -> datetime:
        return datetime.strptime(self.value, "%Y%m%d%H%M%S").replace(tzinfo=timezone.utc)

    @property
    def year(self) -> int:
        return int(self.value[:4])

    @property
    def month(self) -> int:
        return int(self.value[4:6])

    def __str__(self) -> str:
        return self.value


def parse_timestamp14(s: str) -> Timestamp14:
    """Parse a 14-digit timestamp; ``format(parse(s)) == s`` on success.

    Raises :class:`BadTimestamp` on wrong length, non-digits, calendar
    nonsense, or years before the web-archiving era (1996).
    """
    if not isinstance(s, str) or len(s) != 14 or not (s.isascii() and s.isdigit()):
        raise BadTimestamp(f"expected 14 digits, got {s!r}")
    try:
        datetime.strptime(s, "%Y%m%d%H%M%S")
    except ValueError as exc:
        raise BadTimestamp(f"invalid calendar datetime {s!r}") from exc
    if int(s[:4]) < 1996:
        raise BadTimestamp(f"year before 1996 in {s!r}")
    return Timestamp14(s)


def normalize_tag(label: str) -> str:
    """Trim and case-fold a tag label.  Idempotent.

    Raises :class:`InvalidTag` when the result is empty or longer than
    64 characters.
    """
    tag = label.strip().casefold()
    if not tag:
        raise InvalidTag("tag label is empty after trimming")
    if len(tag) > MAX_TAG_LENGTH:
        raise InvalidTag(f"tag label exceeds {MAX_TAG_LENGTH} characters")
    return tag


@dataclass(frozen=True)
class CapturePeriod:
    first_capture: Timestamp14
    last_capture: Timestamp14

    def __post_init__(self):
        if self.first_capture > self.last_capture:
            raise BadTimestamp(
                f"capture period starts after it ends: {self.first_capture} > {self.last_capture}"
            )


@dataclass(frozen=True)
class SourceProvenance:
    """Where a resource came from: an imported collection, a live-web
    provider, or a user upload.

    ``collection_id`` is present iff ``kind`` is archiveCollection.  For
    live-web resources ``collector_name`` holds the provider name; for
    uploads it is empty.
    """

    kind: SourceKind
    collection_id: Optional[str] = None
    collector_name: str = ""
    capture_period: Optional[CapturePeriod] = None

    def __post_init__(self):
        if (self.kind == SourceKind.ARCHIVE_COLLECTION) != (self.collection_id is not None):
            raise ValueError("collection_id present iff kind is archiveCollection")


@dataclass(frozen=True)
class Thumbnail:
    state: ThumbnailState = ThumbnailState.PENDING
    image_ref: Optional[str] = None

    def placeholder_text(self) -> Optional[str]:
        if self.state == ThumbnailState.DEAD_PAGE:
            return DEAD_PAGE_PLACEHOLDER
        return None


@dataclass(frozen=True)
class Comment:
    """Immutable once created; ordered by creation instant."""

    id: str
    author: str
    body: str
    created_at: datetime

    def __post_init__(self):
        if not self.body.strip():
            raise EmptyBody("comment body is empty")


@dataclass(frozen=True)
class Resource:
    """One seed / web page with its metadata and enrichments."""

    id: str
    url: NormalizedUrl
    original_url: str
    title: str
    description: str
    author: str
    media_type: MediaType
    source: SourceProvenance
    tags: frozenset[str] = frozenset()
    comments: tuple[Comment, ...] = ()
    custom_fields: dict[str, str] = field(default_factory=dict)
    thumbnail: Thumbnail = Thumbnail()
    created_by: str = ""
    created_at: datetime = datetime(1970, 1, 1, tzinfo=timezone.utc)

    def with_tags(self, tags: frozenset[str]) -> "Resource":
        return replace(self, tags=tags)


# --- wire records -----------------------------------------------------------
#
# Every domain type has one canonical dict form (camelCase keys) used by the
# manifest format, the event log, and the HTTP API alike.


def _format_instant(dt: datetime) -> str:
    return dt.astimezone(timezone.utc).isoformat().replace("+00:00", "Z")


def _parse_instant(s: str) -> datetime:
    return datetime.fromisoformat(s.replace("Z", "+00:00"))


def capture_period_to_record(p: Optional[CapturePeriod]) -> Optional[dict]:
    if p is None:
        return None
    return {"firstCapture": p.first_capture.value, "lastCapture": p.last_capture.value}


def capture_period_from_record(d: Optional[dict]) -> Optional[CapturePeriod]:
    if d is None:
        return None
    return CapturePeriod(
        first_capture=parse_timestamp14(d["firstCapture"]),
        last_capture=parse_timestamp14(d["lastCapture"]),
    )


def resource_to_record(r: Resource) -> dict[str, Any]:
    return {
        "id": r.id,
        "url": str(r.url),
        "originalUrl": r.original_url,
        "title": r.title,
        "description": r.description,
        "author": r.author,
        "mediaType": r.media_type.value,
        "source": {
            "kind": r.source.kind.value,
            "collectionId": r.source.collection_id,
            "collectorName": r.source.collector_name,
            "capturePeriod": capture_period_to_record(r.source.capture_period),
        },
        "tags": sorted(r.tags),
        "comments": [
            {
                "id": c.id,
                "author": c.author,
                "body": c.body,
                "createdAt": _format_instant(c.created_at),
            }
            for c in r.comments
        ],
        "customFields": dict(sorted(r.custom_fields.items())),
        "thumbnail": {"state": r.thumbnail.state.value, "imageRef": r.thumbnail.image_ref},
        "createdBy": r.created_by,
        "createdAt": _format_instant(r.created_at),
    }


def resource_from_record(d: dict[str, Any]) -> Resource:
    return Resource(
        id=d["id"],
        url=normalize_url(d["url"]),
        original_url=d["originalUrl"],
        title=d["title"],
        description=d["description"],
        author=d["author"],
        media_type=MediaType(d["mediaType"]),
        source=SourceProvenance(
            kind=SourceKind(d["source"]["kind"]),
            collection_id=d["source"]["collectionId"],
            collector_name=d["source"]["collectorName"],
            capture_period=capture_period_from_record(d["source"]["capturePeriod"]),
        ),
        tags=frozenset(d["tags"]),
        comments=tuple(
            Comment(
                id=c["id"],
                author=c["author"],
                body=c["body"],
                created_at=_parse_instant(c["createdAt"]),
            )
            for c in d["comments"]
        ),
        custom_fields=dict(d["customFields"]),
        thumbnail=Thumbnail(
            state=ThumbnailState(d["thumbnail"]["state"]),
            image_ref=d["thumbnail"]["imageRef"],
        ),
        created_by=d["createdBy"],
        created_at=_parse_instant(d["createdAt"]),
    )
