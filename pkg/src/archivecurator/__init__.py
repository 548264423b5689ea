"""Collaborative curation service for web-archive collections."""

from .domain import (
    DEAD_PAGE_PLACEHOLDER,
    MediaType,
    NormalizedUrl,
    Resource,
    SourceKind,
    SourceProvenance,
    Timestamp14,
    normalize_tag,
    normalize_url,
    parse_timestamp14,
)
from .captures import (
    Capture,
    CaptureClient,
    Granularity,
    LinkRotReport,
    audit_liveness,
    build_timeline,
    parse_cdx_response,
    format_cdx_response,
)
from .curation import CurationStore, ExportFormat, Group
from .ingest import CollectionManifest, SeedRecord, import_collection, list_collections, parse_manifest
from .search import FacetConstraint, QueryScope, SearchIndex, SearchQuery, tokenize
from .service import CurationService, ServiceConfig

__version__ = "0.1.0"

__all__ = [
    "DEAD_PAGE_PLACEHOLDER",
    "MediaType",
    "NormalizedUrl",
    "Resource",
    "SourceKind",
    "SourceProvenance",
    "Timestamp14",
    "normalize_tag",
    "normalize_url",
    "parse_timestamp14",
    "Capture",
    "CaptureClient",
    "Granularity",
    "LinkRotReport",
    "audit_liveness",
    "build_timeline",
    "parse_cdx_response",
    "format_cdx_response",
    "CurationStore",
    "ExportFormat",
    "Group",
    "CollectionManifest",
    "SeedRecord",
    "import_collection",
    "list_collections",
    "parse_manifest",
    "FacetConstraint",
    "QueryScope",
    "SearchIndex",
    "SearchQuery",
    "tokenize",
    "CurationService",
    "ServiceConfig",
    "__version__",
]
