"""Error types shared across the service.

Every error carries a stable machine ``code`` (the closed set published by
the HTTP error envelope) and the HTTP status it maps to.  Handlers convert
these to JSON bodies; nothing else should leak to clients.
"""

from __future__ import annotations


class InventoryError(Exception):
    """Base class for all service errors."""

    code = "internal_error"
    http_status = 500

    def __init__(self, message: str = "", **details):
        super().__init__(message or self.__class__.__name__)
        self.message = message or self.__class__.__name__
        self.details = details


# -- domain ------------------------------------------------------------

class UnknownKind(InventoryError):
    code = "unknown_kind"
    http_status = 422


class EmptyChildren(InventoryError):
    code = "empty_children"
    http_status = 422


class SelfLink(InventoryError):
    code = "self_link"
    http_status = 422


class CycleDetected(InventoryError):
    code = "cycle_detected"
    http_status = 409


# -- storage -----------------------------------------------------------

class ValidationFailed(InventoryError):
    code = "validation_failed"
    http_status = 422

    def __init__(self, message="validation failed", field_errors=None, submitted=None):
        super().__init__(message)
        self.field_errors = dict(field_errors or {})
        self.submitted = submitted


class DuplicateBarcode(InventoryError):
    code = "duplicate_barcode"
    http_status = 409


class DuplicateUsername(InventoryError):
    code = "duplicate_username"
    http_status = 409


class ForeignKeyMissing(InventoryError):
    code = "foreign_key_missing"
    http_status = 422


class NotFound(InventoryError):
    code = "not_found"
    http_status = 404


class ImmutableField(InventoryError):
    code = "immutable_field"
    http_status = 422


class HasDependents(InventoryError):
    code = "has_dependents"
    http_status = 409


class BadPage(InventoryError):
    code = "bad_page"
    http_status = 422


class DuplicateLink(InventoryError):
    code = "duplicate_link"
    http_status = 409


class QuotaExceeded(InventoryError):
    code = "quota_exceeded"
    http_status = 409


# -- query engine ------------------------------------------------------

class EmptyQuery(InventoryError):
    code = "empty_query"
    http_status = 422


class DanglingOperator(InventoryError):
    code = "dangling_operator"
    http_status = 422


class EmptyPool(InventoryError):
    code = "empty_pool"
    http_status = 422


class NoSearchRun(InventoryError):
    code = "no_search_run"
    http_status = 409


class SearchFault(InventoryError):
    """Wraps store-level failures surfaced by a search."""

    code = "search_fault"
    http_status = 500


# -- access control ----------------------------------------------------

class AuthFailed(InventoryError):
    code = "auth_failed"
    http_status = 401


class AccountBlocked(InventoryError):
    code = "account_blocked"
    http_status = 401


class PermissionDenied(InventoryError):
    code = "permission_denied"
    http_status = 403


class NotAuthenticated(PermissionDenied):
    """No live session at all; same code, auth-flavoured status."""

    http_status = 401


class ChallengeExpired(InventoryError):
    code = "challenge_expired"
    http_status = 401


class BiometricMismatch(InventoryError):
    code = "biometric_mismatch"
    http_status = 401


class UnsupportedLanguage(InventoryError):
    code = "unsupported_language"
    http_status = 422


# -- workflow ----------------------------------------------------------

class InvalidState(InventoryError):
    code = "invalid_state"
    http_status = 409


class SelfApproval(InventoryError):
    code = "self_approval"
    http_status = 409


# -- ingestion ---------------------------------------------------------

class ColumnCountMismatch(InventoryError):
    code = "column_count_mismatch"
    http_status = 422

    def __init__(self, row_number: int, message=""):
        super().__init__(message or f"row {row_number}: wrong number of columns")
        self.row_number = row_number


class MissingLocation(InventoryError):
    code = "missing_location"
    http_status = 422

    def __init__(self, message="Select location"):
        super().__init__(message)


# -- reporting ---------------------------------------------------------

class UnknownReportKind(InventoryError):
    code = "unknown_report_kind"
    http_status = 404


class NotImplementedFeature(InventoryError):
    """Routes the page tree exposes but the feature matrix leaves out."""

    code = "not_implemented"
    http_status = 501
