"""CSV paste/file import with per-row validation and a batch report.

Input is comma-delimited text with standard double-quote escaping, LF or
CRLF newlines, one record per line.  Scanner batches arrive the same way
(one barcode per line under a single-column mapping).  Rows fail
individually: one bad line never poisons the batch.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

from . import domain
from .access import AccessControl, Session
from .errors import (
    ColumnCountMismatch,
    InventoryError,
    MissingLocation,
    UnknownKind,
    ValidationFailed,
)
from .storage import Store

IMPORT_KINDS = ("asset", "license", "location")


@dataclass
class ImportSpec:
    """How pasted columns map onto entity fields."""

    kind: str
    column_count: int
    column_mapping: tuple[str, ...]
    default_location: int | None = None  # required for asset imports


@dataclass
class ImportReport:
    created: list[int] = field(default_factory=list)
    failed: list[tuple[int, str]] = field(default_factory=list)

    @property
    def total_rows(self) -> int:
        return len(self.created) + len(self.failed)


def _check_spec(spec: ImportSpec):
    if spec.kind not in IMPORT_KINDS:
        raise UnknownKind(f"cannot import kind: {spec.kind}")
    mapping = tuple(spec.column_mapping)
    if len(mapping) != spec.column_count:
        raise ValidationFailed(
            field_errors={"column_mapping": "one name per column"},
            submitted={"column_count": spec.column_count,
                       "column_mapping": list(mapping)})
    if len(set(mapping)) != len(mapping):
        raise ValidationFailed(
            field_errors={"column_mapping": "column names must be distinct"},
            submitted={"column_mapping": list(mapping)})
    valid = set(domain.field_names(spec.kind))
    valid.add("type")  # accepted alias for the kind's enum field
    unknown = [name for name in mapping if name not in valid]
    if unknown:
        raise ValidationFailed(
            field_errors={name: f"not a {spec.kind} field" for name in unknown},
            submitted={"column_mapping": list(mapping)})
    if spec.kind == "asset" and spec.default_location is None:
        raise MissingLocation("Select location")


def parse_delimited(text: str, spec: ImportSpec) -> list[dict]:
    """Split pasted text into field maps bound positionally to the mapping."""
    _check_spec(spec)
    rows = []
    reader = csv.reader(io.StringIO(text))
    for number, record in enumerate(reader, start=1):
        if not record:
            continue  # blank line
        if len(record) != spec.column_count:
            raise ColumnCountMismatch(
                number, f"row {number}: expected {spec.column_count} "
                        f"column(s), got {len(record)}")
        rows.append(dict(zip(spec.column_mapping, record)))
    return rows


def render_delimited(rows: list[dict], spec: ImportSpec) -> str:
    """Inverse of parse_delimited, used for exports and round-trip checks."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    for row in rows:
        writer.writerow([row.get(name, "") for name in spec.column_mapping])
    return out.getvalue()


def import_rows_as(store: Store, rows: list[dict], spec: ImportSpec,
                   actor: str) -> ImportReport:
    """Operator path (CLI, migrations): no session, caller names the actor."""
    _check_spec(spec)
    report = ImportReport()
    for number, row in enumerate(rows, start=1):
        fields = {name: value for name, value in row.items() if value != ""}
        if spec.kind == "asset":
            fields.setdefault("location_id", spec.default_location)
        try:
            report.created.append(store.create_record(spec.kind, fields, actor))
        except InventoryError as exc:
            report.failed.append((number, exc.message))
    return report


def import_rows(store: Store, access: AccessControl, session: Session | None,
                rows: list[dict], spec: ImportSpec) -> ImportReport:
    """Create one record per row; failures are reported, not raised."""
    access.require(session, "import", spec.kind)
    return import_rows_as(store, rows, spec, session.username)


def import_text(store: Store, access: AccessControl, session: Session | None,
                text: str, spec: ImportSpec) -> ImportReport:
    """Parse then import in one call (the paste-and-submit path)."""
    access.require(session, "import", spec.kind)
    return import_rows(store, access, session, parse_delimited(text, spec), spec)
