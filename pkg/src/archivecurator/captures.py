"""Wayback CDX wire protocol: capture records, timelines, save-page
requests, and link-rot audits.

CDX responses are line-oriented, seven space-separated fields per line:
``urlkey timestamp original mimetype statuscode digest length``.
Parsing and formatting round-trip byte-for-byte so recorded responses
can be used as golden files.
"""

from __future__ import annotations

import logging
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from datetime import datetime, timezone
from enum import Enum
from typing import Callable, Iterable, Optional, Protocol
from urllib.parse import urlsplit

import requests

from .domain import Timestamp14, normalize_url, parse_timestamp14, _format_instant, _parse_instant
from .errors import BadTimestamp, CdxSyntax, UpstreamUnavailable, ValidationError

logger = logging.getLogger(__name__)

CDX_FIELD_COUNT = 7

# Common multi-label public suffixes; enough for the registrable-domain
# heuristic used in squat detection, replaceable via the checker interface.
_TWO_LEVEL_SUFFIXES = {
    "co.uk", "org.uk", "ac.uk", "gov.uk", "me.uk", "net.uk",
    "com.au", "net.au", "org.au", "edu.au", "gov.au",
    "co.jp", "ne.jp", "or.jp", "ac.jp", "go.jp",
    "co.nz", "org.nz", "net.nz", "ac.nz",
    "co.za", "org.za", "web.za",
    "com.br", "org.br", "net.br", "gov.br",
    "com.mx", "org.mx", "com.ar", "com.cn", "org.cn", "net.cn",
    "com.tw", "org.tw", "co.in", "org.in", "net.in", "ac.in", "gov.in",
    "co.kr", "or.kr", "com.sg", "com.hk", "com.tr", "com.ua",
}


@dataclass(frozen=True)
class Capture:
    """One archived snapshot of a URL."""

    urlkey: str
    timestamp: Timestamp14
    original: str
    mime_type: str
    status_code: Optional[int]  # None encodes the "-" placeholder
    digest: str
    length: int

    def to_line(self) -> str:
        status = "-" if self.status_code is None else str(self.status_code)
        return " ".join(
            [self.urlkey, self.timestamp.value, self.original, self.mime_type, status, self.digest, str(self.length)]
        )


def parse_cdx_response(data: bytes) -> list[Capture]:
    """Parse a CDX response body, one capture per non-empty line.

    Raises :class:`CdxSyntax` (with the 1-based line number) on a wrong
    field count, a bad timestamp, or a non-integer length.
    """
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise CdxSyntax(f"response is not UTF-8: {exc}", line=0) from exc
    captures = []
    for lineno, line in enumerate(text.split("\n"), start=1):
        if not line:
            continue
        fields = line.split(" ")
        if len(fields) != CDX_FIELD_COUNT or not all(fields):
            raise CdxSyntax(
                f"line {lineno}: expected {CDX_FIELD_COUNT} fields, got {len([f for f in fields if f])}",
                line=lineno,
            )
        urlkey, ts, original, mime, status, digest, length = fields
        try:
            timestamp = parse_timestamp14(ts)
        except BadTimestamp as exc:
            raise CdxSyntax(f"line {lineno}: {exc.message}", line=lineno) from exc
        if status == "-":
            status_code: Optional[int] = None
        else:
            try:
                status_code = int(status)
            except ValueError as exc:
                raise CdxSyntax(f"line {lineno}: bad status code {status!r}", line=lineno) from exc
        try:
            length_bytes = int(length)
        except ValueError as exc:
            raise CdxSyntax(f"line {lineno}: bad length {length!r}", line=lineno) from exc
        captures.append(
            Capture(
                urlkey=urlkey,
                timestamp=timestamp,
                original=original,
                mime_type=mime,
                status_code=status_code,
                digest=digest,
                length=length_bytes,
            )
        )
    return captures


def format_cdx_response(captures: Iterable[Capture]) -> bytes:
    lines = [c.to_line() for c in captures]
    return ("\n".join(lines) + ("\n" if lines else "")).encode("utf-8")


# -- timeline -----------------------------------------------------------------


class Granularity(str, Enum):
    YEAR = "year"
    MONTH = "month"


@dataclass(frozen=True)
class TimelineBins:
    granularity: Granularity
    bins: tuple[tuple[str, int], ...]

    @property
    def total(self) -> int:
        return sum(count for _, count in self.bins)


def _month_range(first: tuple[int, int], last: tuple[int, int]):
    year, month = first
    while (year, month) <= last:
        yield year, month
        month += 1
        if month > 12:
            month = 1
            year += 1


def build_timeline(captures: list[Capture], granularity: Granularity) -> TimelineBins:
    """Bin captures by year or month, contiguous and zero-filled.

    Input must be ascending by timestamp; bin counts always sum to the
    number of captures.
    """
    if not captures:
        return TimelineBins(granularity=granularity, bins=())
    first, last = captures[0].timestamp, captures[-1].timestamp
    if first > last:
        raise ValidationError("captures must be ascending by timestamp")
    counts: dict[str, int] = {}
    if granularity == Granularity.YEAR:
        labels = [str(y) for y in range(first.year, last.year + 1)]
        for c in captures:
            key = str(c.timestamp.year)
            counts[key] = counts.get(key, 0) + 1
    else:
        labels = [f"{y:04d}-{m:02d}" for y, m in _month_range((first.year, first.month), (last.year, last.month))]
        for c in captures:
            key = f"{c.timestamp.year:04d}-{c.timestamp.month:02d}"
            counts[key] = counts.get(key, 0) + 1
    return TimelineBins(
        granularity=granularity,
        bins=tuple((label, counts.get(label, 0)) for label in labels),
    )


# -- archive-now --------------------------------------------------------------


@dataclass(frozen=True)
class ArchiveRequestReceipt:
    requested_at: datetime
    target_url: str
    accepted: bool


def receipt_to_record(r: ArchiveRequestReceipt) -> dict:
    return {
        "requestedAt": _format_instant(r.requested_at),
        "targetUrl": r.target_url,
        "accepted": r.accepted,
    }


def receipt_from_record(d: dict) -> ArchiveRequestReceipt:
    return ArchiveRequestReceipt(
        requested_at=_parse_instant(d["requestedAt"]),
        target_url=d["targetUrl"],
        accepted=d["accepted"],
    )


class CaptureClient:
    """HTTP client for a CDX endpoint and a save-page endpoint.

    ``archive_now`` is idempotent per URL within a 60 second window:
    repeats return the first receipt without a second outbound request.
    """

    SAVE_WINDOW_SECONDS = 60.0

    def __init__(
        self,
        cdx_endpoint: str,
        save_endpoint: str,
        timeout: float = 5.0,
        clock: Optional[Callable[[], datetime]] = None,
        monotonic: Callable[[], float] = time.monotonic,
        session: Optional[requests.Session] = None,
    ):
        self.cdx_endpoint = cdx_endpoint
        self.save_endpoint = save_endpoint.rstrip("/")
        self.timeout = timeout
        self.clock = clock or (lambda: datetime.now(timezone.utc))
        self.monotonic = monotonic
        self.session = session or requests.Session()
        self._recent_saves: dict[str, tuple[float, ArchiveRequestReceipt]] = {}
        self._lock = threading.Lock()

    def fetch_captures(self, url: str) -> list[Capture]:
        """All captures of ``url``, ascending by timestamp and
        deduplicated on (timestamp, digest)."""
        try:
            response = self.session.get(self.cdx_endpoint, params={"url": url}, timeout=self.timeout)
        except requests.RequestException as exc:
            raise UpstreamUnavailable(f"CDX endpoint unreachable: {exc}") from exc
        if response.status_code != 200:
            raise UpstreamUnavailable(f"CDX endpoint returned {response.status_code}")
        captures = parse_cdx_response(response.content)
        unique = {(c.timestamp.value, c.digest): c for c in captures}
        return [unique[key] for key in sorted(unique)]

    def archive_now(self, url: str) -> ArchiveRequestReceipt:
        """Ask the archive to capture ``url`` immediately."""
        canonical = str(normalize_url(url))
        with self._lock:
            cached = self._recent_saves.get(canonical)
            if cached is not None and self.monotonic() < cached[0]:
                return cached[1]
        accepted = False
        try:
            response = self.session.get(f"{self.save_endpoint}/{url}", timeout=self.timeout)
            accepted = 200 <= response.status_code < 300
        except requests.RequestException as exc:
            logger.warning("save-page request for %s failed: %s", url, exc)
        receipt = ArchiveRequestReceipt(requested_at=self.clock(), target_url=url, accepted=accepted)
        with self._lock:
            self._recent_saves[canonical] = (self.monotonic() + self.SAVE_WINDOW_SECONDS, receipt)
        return receipt

    def archival_status(self, url: str) -> Optional[tuple[Timestamp14, Timestamp14, int]]:
        """(first, last, captureCount) for ``url``; None when never captured."""
        captures = self.fetch_captures(url)
        if not captures:
            return None
        return captures[0].timestamp, captures[-1].timestamp, len(captures)


# -- link-rot audit -----------------------------------------------------------


class LivenessStatus(str, Enum):
    ALIVE = "alive"
    HTTP_404 = "http404"
    OTHER_ERROR = "otherError"
    REDIRECT_SQUAT = "redirectSquat"


@dataclass(frozen=True)
class ProbeResult:
    status_code: Optional[int]
    final_url: Optional[str]
    error: Optional[str] = None


class LivenessChecker(Protocol):
    def probe(self, url: str) -> ProbeResult: ...


@dataclass(frozen=True)
class SeedStatus:
    url: str
    category: str
    status: LivenessStatus


@dataclass(frozen=True)
class CategoryStats:
    total: int
    alive: int
    percent_alive: int


@dataclass(frozen=True)
class LinkRotReport:
    categories: dict[str, CategoryStats]
    per_seed: tuple[SeedStatus, ...]


def registrable_domain(host: str) -> str:
    labels = host.lower().rstrip(".").split(".")
    if len(labels) <= 2:
        return ".".join(labels)
    if ".".join(labels[-2:]) in _TWO_LEVEL_SUFFIXES:
        return ".".join(labels[-3:])
    return ".".join(labels[-2:])


def percent_half_up(part: int, whole: int) -> int:
    """Integer percentage rounded half-up, computed exactly."""
    if whole == 0:
        return 0
    return (200 * part + whole) // (2 * whole)


class HttpLivenessChecker:
    """Default probe: HEAD with redirect following, GET fallback when the
    server rejects HEAD; 10 second timeout."""

    def __init__(self, timeout: float = 10.0, session: Optional[requests.Session] = None):
        self.timeout = timeout
        self.session = session or requests.Session()

    def probe(self, url: str) -> ProbeResult:
        try:
            response = self.session.head(url, allow_redirects=True, timeout=self.timeout)
            if response.status_code in (405, 501):
                response = self.session.get(url, allow_redirects=True, timeout=self.timeout)
            return ProbeResult(status_code=response.status_code, final_url=response.url)
        except requests.RequestException as exc:
            return ProbeResult(status_code=None, final_url=None, error=str(exc))


def classify_probe(url: str, result: ProbeResult) -> LivenessStatus:
    if result.status_code is None:
        return LivenessStatus.OTHER_ERROR
    if 200 <= result.status_code < 300:
        if result.final_url:
            original_host = urlsplit(url).hostname or ""
            final_host = urlsplit(result.final_url).hostname or ""
            if (
                original_host
                and final_host
                and registrable_domain(original_host) != registrable_domain(final_host)
            ):
                return LivenessStatus.REDIRECT_SQUAT
        return LivenessStatus.ALIVE
    if result.status_code == 404:
        return LivenessStatus.HTTP_404
    return LivenessStatus.OTHER_ERROR


def audit_liveness(
    seeds: list[tuple[str, str]],
    checker: Optional[LivenessChecker] = None,
    parallelism: int = 8,
) -> LinkRotReport:
    """Probe every (url, category) seed and tally liveness per category.

    Probes run with bounded parallelism and per-host serialization; the
    report lists seeds in input order regardless of completion order.
    Per-seed failures become ``otherError``, never exceptions.
    """
    if not seeds:
        raise ValidationError("audit needs at least one categorized seed")
    if checker is None:
        checker = HttpLivenessChecker()

    host_locks: dict[str, threading.Lock] = {}
    registry_lock = threading.Lock()

    def lock_for(url: str) -> threading.Lock:
        host = urlsplit(url).hostname or ""
        with registry_lock:
            return host_locks.setdefault(host, threading.Lock())

    def probe_one(entry: tuple[str, str]) -> LivenessStatus:
        url, _ = entry
        with lock_for(url):
            try:
                result = checker.probe(url)
            except Exception as exc:  # checker bugs must not kill the audit
                result = ProbeResult(status_code=None, final_url=None, error=str(exc))
        return classify_probe(url, result)

    with ThreadPoolExecutor(max_workers=max(1, parallelism)) as pool:
        statuses = list(pool.map(probe_one, seeds))

    per_seed = tuple(
        SeedStatus(url=url, category=category, status=status)
        for (url, category), status in zip(seeds, statuses)
    )
    categories: dict[str, CategoryStats] = {}
    for category in dict.fromkeys(cat for _, cat in seeds):
        rows = [s for s in per_seed if s.category == category]
        alive = sum(1 for s in rows if s.status == LivenessStatus.ALIVE)
        categories[category] = CategoryStats(
            total=len(rows), alive=alive, percent_alive=percent_half_up(alive, len(rows))
        )
    return LinkRotReport(categories=categories, per_seed=per_seed)
