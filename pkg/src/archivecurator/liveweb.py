"""Live-web search providers and the federation connector.

Providers plug in behind one interface.  Two ship with the service: a
deterministic fixture provider (tests, offline demos) and a generic
HTTP+JSON provider configured with a URL template and field paths, so
any keyword API can be wired in without code.  Live hits are never
persisted; they become resources only through an explicit copy into a
group.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Optional, Protocol

import requests

from .captures import CaptureClient
from .domain import MediaType, Timestamp14
from .errors import ProviderUnavailable, UpstreamUnavailable, ValidationError


@dataclass(frozen=True)
class LiveHit:
    url: str
    title: str
    snippet: str
    media_type: MediaType
    provider: str

    def __post_init__(self):
        if not self.url:
            raise ValidationError("live hit without a URL")


class LiveWebProvider(Protocol):
    name: str

    def search(self, keywords: str, media_type: MediaType, limit: int) -> list[LiveHit]: ...


class FixtureProvider:
    """Canned hits keyed by query string (or single token); deterministic."""

    def __init__(self, hits: dict[str, list[dict[str, str]]], name: str = "fixture"):
        self.name = name
        self._hits = {key.casefold(): entries for key, entries in hits.items()}

    def search(self, keywords: str, media_type: MediaType, limit: int) -> list[LiveHit]:
        entries = list(self._hits.get(keywords.casefold(), []))
        if not entries:
            seen = set()
            for token in keywords.casefold().split():
                for entry in self._hits.get(token, []):
                    if entry["url"] not in seen:
                        seen.add(entry["url"])
                        entries.append(entry)
        hits = []
        for entry in entries:
            hit_type = MediaType(entry.get("mediaType", MediaType.WEBPAGE.value))
            if hit_type != media_type:
                continue
            hits.append(
                LiveHit(
                    url=entry["url"],
                    title=entry.get("title", ""),
                    snippet=entry.get("snippet", ""),
                    media_type=hit_type,
                    provider=self.name,
                )
            )
        return hits[: max(0, limit)]


def _resolve_path(payload: Any, path: str) -> Any:
    value = payload
    for segment in path.split("."):
        if isinstance(value, list):
            value = value[int(segment)]
        elif isinstance(value, dict):
            value = value[segment]
        else:
            raise KeyError(path)
    return value


class HttpJsonProvider:
    """Generic provider: URL template with {query}/{limit} placeholders
    plus field paths into the JSON response."""

    def __init__(
        self,
        name: str,
        endpoint_template: str,
        results_path: str,
        field_paths: dict[str, str],
        api_key_header: Optional[str] = None,
        api_key_env: Optional[str] = None,
        timeout: float = 5.0,
        session: Optional[requests.Session] = None,
    ):
        self.name = name
        self.endpoint_template = endpoint_template
        self.results_path = results_path
        self.field_paths = field_paths
        self.api_key_header = api_key_header
        self.api_key_env = api_key_env
        self.timeout = timeout
        self.session = session or requests.Session()

    def search(self, keywords: str, media_type: MediaType, limit: int) -> list[LiveHit]:
        url = self.endpoint_template.format(
            query=requests.utils.quote(keywords), limit=limit, mediaType=media_type.value
        )
        headers = {}
        if self.api_key_header and self.api_key_env:
            key = os.environ.get(self.api_key_env, "")
            if key:
                headers[self.api_key_header] = key
        try:
            response = self.session.get(url, headers=headers, timeout=self.timeout)
        except requests.RequestException as exc:
            raise ProviderUnavailable(f"provider {self.name} unreachable: {exc}") from exc
        if response.status_code != 200:
            raise ProviderUnavailable(f"provider {self.name} returned {response.status_code}")
        try:
            items = _resolve_path(response.json(), self.results_path)
            hits = [
                LiveHit(
                    url=str(_resolve_path(item, self.field_paths["url"])),
                    title=str(_resolve_path(item, self.field_paths.get("title", "title"))),
                    snippet=str(_resolve_path(item, self.field_paths.get("snippet", "snippet"))),
                    media_type=media_type,
                    provider=self.name,
                )
                for item in items[: max(0, limit)]
            ]
        except (KeyError, IndexError, TypeError, ValueError) as exc:
            raise ProviderUnavailable(f"provider {self.name} response shape: {exc}") from exc
        return hits


def provider_from_config(path: str | Path) -> LiveWebProvider:
    """Build a provider from a JSON config file (CLI plumbing)."""
    config = json.loads(Path(path).read_text(encoding="utf-8"))
    kind = config.get("type", "fixture")
    if kind == "fixture":
        return FixtureProvider(hits=config.get("hits", {}), name=config.get("name", "fixture"))
    if kind == "http":
        return HttpJsonProvider(
            name=config["name"],
            endpoint_template=config["endpoint"],
            results_path=config.get("resultsPath", "results"),
            field_paths=config.get("fields", {"url": "url", "title": "title", "snippet": "snippet"}),
            api_key_header=config.get("apiKeyHeader"),
            api_key_env=config.get("apiKeyEnv"),
        )
    raise ValidationError(f"unknown provider type {kind!r}")


class LiveWebConnector:
    """Federates live hits into search output and annotates archival status."""

    def __init__(
        self,
        provider: Optional[LiveWebProvider] = None,
        capture_client: Optional[CaptureClient] = None,
    ):
        self.provider = provider
        self.capture_client = capture_client

    def query_live(
        self, keywords: str, media_type: MediaType = MediaType.WEBPAGE, limit: int = 10
    ) -> list[LiveHit]:
        if self.provider is None:
            raise ProviderUnavailable("no live-web provider configured")
        if limit <= 0:
            return []
        hits = self.provider.search(keywords, media_type, limit)
        return hits[:limit]

    def archival_status(self, url: str) -> Optional[tuple[Timestamp14, Timestamp14, int]]:
        """(first, last, captureCount) via the CDX client; None when never
        captured."""
        if self.capture_client is None:
            raise UpstreamUnavailable("no CDX endpoint configured")
        return self.capture_client.archival_status(url)
