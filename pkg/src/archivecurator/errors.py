"""Exception hierarchy shared by all modules.

Every error carries a stable ``code`` string that the HTTP layer maps onto
its ``{code, message, detail}`` error body, plus the status it surfaces as.
"""

from __future__ import annotations

from typing import Any


class ServiceError(Exception):
    """Base class for all domain and infrastructure errors."""

    code = "serviceError"
    http_status = 400

    def __init__(self, message: str, detail: Any = None):
        super().__init__(message)
        self.message = message
        self.detail = detail


class MalformedUrl(ServiceError):
    code = "malformedUrl"


class BadTimestamp(ServiceError):
    code = "badTimestamp"


class InvalidTag(ServiceError):
    code = "invalidTag"


class ValidationError(ServiceError):
    code = "validationError"


class NotFound(ServiceError):
    code = "notFound"
    http_status = 404


class ManifestSyntax(ServiceError):
    code = "manifestSyntax"


class ManifestSemantic(ServiceError):
    code = "manifestSemantic"


class DuplicateCollection(ServiceError):
    code = "duplicateCollection"
    http_status = 409


class BadQuery(ServiceError):
    code = "badQuery"


class ProviderUnavailable(ServiceError):
    code = "providerUnavailable"
    http_status = 503


class UpstreamUnavailable(ServiceError):
    code = "upstreamUnavailable"
    http_status = 503


class CdxSyntax(ServiceError):
    """Raised on malformed CDX lines; ``line`` is 1-based."""

    code = "cdxSyntax"

    def __init__(self, message: str, line: int, detail: Any = None):
        super().__init__(message, detail)
        self.line = line


class ReadOnlyViolation(ServiceError):
    code = "readOnlyViolation"
    http_status = 403


class DepthExceeded(ServiceError):
    code = "depthExceeded"
    http_status = 409


class DuplicateInGroup(ServiceError):
    code = "duplicateInGroup"
    http_status = 409


class NotMember(ServiceError):
    code = "notMember"
    http_status = 403


class EmptyBody(ServiceError):
    code = "emptyBody"


class StorageFailure(ServiceError):
    code = "storageFailure"
    http_status = 503


class CorruptState(ServiceError):
    code = "corruptState"


class AuthRequired(ServiceError):
    code = "authRequired"
    http_status = 401
