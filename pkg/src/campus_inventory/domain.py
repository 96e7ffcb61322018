"""Entity definitions and pure domain logic.

Field names, enumerations and defaults line up with the relational
schema the storage layer speaks.  Everything here is value-level: no
storage, no transport.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime

from .errors import CycleDetected, EmptyChildren, SelfLink, UnknownKind

ASSET_TYPES = (
    "Desk", "Computer", "Academic_stuff", "Other", "Mouse", "Keyboard",
    "Printer", "Monitor", "Table", "Chair", "Projector", "Software",
)
ASSET_STATUSES = ("available", "broken", "not_available")
GROUP_TYPES = ("Group", "Work_station", "Office_equipment")
LICENSE_TYPES = ("BSD", "Open Source", "Dual", "Quantity")
LOCATION_TYPES = (
    "storage", "home", "floor", "holl", "admin_office", "suite", "cubicle",
    "atrium", "teaching_lab", "research_lab", "grad_seat", "teacher_office",
    "drawer", "printer_room",
)
PERSON_STATUSES = ("available", "blocked", "temporary", "deleted")
PERSON_TYPES = (
    "full_worker", "temp_worker", "grad_student", "undergrad_student",
    "temporary", "visitor", "undefined",
)
REQUEST_TYPES = ("Movement", "Acquisition", "Reparation")
REQUEST_STATUSES = ("Not_Approved", "Approved", "Rejected", "Completed")
ITEM_TYPES = ("Move", "Buy", "Repair", "Delete")
APPROVAL_LEVELS = ("Level1", "Level2", "Level3")
BUILDING_SIZES = ("Big", "Medium", "Small")
FACULTY_KINDS = ("Faculty", "Department")
PERSON_LOCATION_TYPES = ("grad_seat", "research_seat", "responsible", "works_place", "belong")
PERSON_DEPART_TYPES = ("works_for", "study_in")
LOCATION_RELATION_TYPES = ("contain", "unit")

ENUMS = {
    "asset_type": ASSET_TYPES,
    "asset_status": ASSET_STATUSES,
    "group_type": GROUP_TYPES,
    "license_type": LICENSE_TYPES,
    "location_type": LOCATION_TYPES,
    "person_status": PERSON_STATUSES,
    "person_type": PERSON_TYPES,
    "request_type": REQUEST_TYPES,
    "request_status": REQUEST_STATUSES,
    "item_type": ITEM_TYPES,
    "approval_level": APPROVAL_LEVELS,
    "building_size": BUILDING_SIZES,
    "faculty_kind": FACULTY_KINDS,
    "person_location_type": PERSON_LOCATION_TYPES,
    "person_depart_type": PERSON_DEPART_TYPES,
    "location_relation_type": LOCATION_RELATION_TYPES,
}


@dataclass(frozen=True)
class FieldSpec:
    """Validation rules for one entity field."""

    name: str
    required: bool = False
    max_len: int | None = None
    enum: tuple[str, ...] | None = None
    numeric: bool = False          # integer-valued
    decimal: bool = False          # numeric, fractions allowed
    min_value: int | None = None
    boolean: bool = False
    default: object = None
    has_default: bool = False
    server_set: bool = False       # assigned by the store, never by callers
    immutable: bool = False        # frozen after creation

    def with_default(self):
        return self.has_default


def _f(name, **kw):
    if "default" in kw:
        kw["has_default"] = True
    return FieldSpec(name, **kw)


# One spec table per entity kind.  ``server_set`` fields are rejected on
# input; ``immutable`` fields are rejected on update.
FIELD_SPECS: dict[str, tuple[FieldSpec, ...]] = {
    "asset": (
        _f("asset_id", numeric=True, server_set=True, immutable=True),
        _f("barcode", max_len=50),
        _f("serial", max_len=50),
        _f("location_id", required=True, numeric=True),
        _f("asset_type", required=True, enum=ASSET_TYPES),
        _f("description", max_len=2000),
        _f("status", enum=ASSET_STATUSES, default="available"),
        _f("color", max_len=250),
        _f("material", max_len=250),
        _f("brand", max_len=250),
        _f("host", max_len=250),
        _f("created_date", server_set=True, immutable=True),
        _f("purchase_no", max_len=250, default="not set"),
        _f("request_no", max_len=250, default="not set"),
    ),
    "license": (
        _f("license_id", numeric=True, server_set=True, immutable=True),
        _f("asset_id", numeric=True),
        _f("name", max_len=250),
        _f("license_type", enum=LICENSE_TYPES, default="Quantity"),
        _f("licence_counter", numeric=True, min_value=0, default=0),
        _f("price", decimal=True),
        _f("term", max_len=250),
        _f("licence_company", max_len=250),
        _f("creation_date", server_set=True, immutable=True),
        _f("deleted_date", server_set=True),
        _f("purchase_no", max_len=250, default="not set"),
        _f("request_no", max_len=250, default="not set"),
    ),
    "location": (
        _f("location_id", numeric=True, server_set=True, immutable=True),
        _f("capacity", numeric=True, min_value=0, default=0),
        _f("location_type", enum=LOCATION_TYPES, default="drawer"),
        _f("belong_to", numeric=True),
        _f("description", max_len=1000, default="No Description"),
        _f("location_num", max_len=10, default="0"),
        _f("key_num", numeric=True, default=0),
        _f("code_num", numeric=True, default=0),
        _f("width", max_len=250),
        _f("length", max_len=250),
        _f("plan", max_len=550),
    ),
    "person": (
        _f("person_id", numeric=True, server_set=True, immutable=True),
        _f("first_name", max_len=250),
        _f("last_name", max_len=250),
        _f("username", required=True, max_len=50),
        _f("password_digest", max_len=250),
        _f("address", max_len=250),
        _f("email", max_len=50),
        _f("mobile", max_len=50),
        _f("person_code", max_len=50),
        _f("status", enum=PERSON_STATUSES, default="available"),
        _f("person_type", enum=PERSON_TYPES, default="undefined"),
        _f("check_biometric", boolean=True, default=False),
        _f("created_date", server_set=True, immutable=True),
        _f("delete_date", server_set=True),
    ),
    "request": (
        _f("request_id", numeric=True, server_set=True, immutable=True),
        _f("requested_by", numeric=True, server_set=True),
        _f("location_to", numeric=True),
        _f("request_type", enum=REQUEST_TYPES, default="Movement"),
        _f("description", max_len=2000),
        _f("status", enum=REQUEST_STATUSES, default="Not_Approved"),
        _f("creation_date", server_set=True, immutable=True),
        _f("delete_date", server_set=True),
        _f("period", numeric=True, min_value=1),
    ),
    "building": (
        _f("building_id", numeric=True, server_set=True, immutable=True),
        _f("address", max_len=250),
        _f("name", max_len=250),
        _f("size_class", enum=BUILDING_SIZES, default="Medium"),
        _f("floor_num", numeric=True, min_value=1, default=1),
    ),
    "faculty": (
        _f("fac_dep_id", numeric=True, server_set=True, immutable=True),
        _f("building", numeric=True),
        _f("name", required=True, max_len=250),
        _f("kind", enum=FACULTY_KINDS, default="Department"),
        _f("belong_to", numeric=True),
    ),
    "role": (
        _f("role_id", required=True, max_len=250),
        _f("description", max_len=2000),
        _f("level_name", enum=APPROVAL_LEVELS, default="Level1"),
    ),
}

ENTITY_KINDS = tuple(FIELD_SPECS)

# The per-kind enum-typed field; payloads may abbreviate it as "type".
TYPE_FIELD = {
    "asset": "asset_type",
    "license": "license_type",
    "location": "location_type",
    "person": "person_type",
    "request": "request_type",
    "building": "size_class",
    "faculty": "kind",
}


@dataclass
class ValidationReport:
    """Outcome of validate_entity: field errors plus normalized values."""

    errors: list[tuple[str, str]] = field(default_factory=list)
    normalized: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.errors

    def error_map(self) -> dict[str, str]:
        out: dict[str, str] = {}
        for name, msg in self.errors:
            out.setdefault(name, msg)
        return out


def field_names(kind: str) -> tuple[str, ...]:
    if kind not in FIELD_SPECS:
        raise UnknownKind(f"unknown entity kind: {kind}")
    return tuple(s.name for s in FIELD_SPECS[kind])


def _is_int(value) -> bool:
    if isinstance(value, bool):
        return False
    if isinstance(value, int):
        return True
    if isinstance(value, str):
        try:
            int(value)
            return True
        except ValueError:
            return False
    return False


def _is_number(value) -> bool:
    if isinstance(value, bool):
        return False
    if isinstance(value, (int, float)):
        return True
    if isinstance(value, str):
        try:
            float(value)
            return True
        except ValueError:
            return False
    return False


def validate_entity(kind: str, fields: dict, *, partial: bool = False) -> ValidationReport:
    """Check a field map against the rules for ``kind``.

    Total: always returns a report, never raises for bad values (only for
    an unknown kind).  With ``partial`` set, requiredness and defaults are
    skipped so update change-sets can be checked on their own.
    """
    if kind not in FIELD_SPECS:
        raise UnknownKind(f"unknown entity kind: {kind}")
    specs = {s.name: s for s in FIELD_SPECS[kind]}
    report = ValidationReport()

    values = dict(fields)
    alias = TYPE_FIELD.get(kind)
    if alias and "type" in values and alias not in values:
        values[alias] = values.pop("type")

    for name, value in values.items():
        spec = specs.get(name)
        if spec is None:
            report.errors.append((name, "unknown field"))
            continue
        if spec.server_set and value is not None:
            report.errors.append((name, "set by the server"))
            continue
        if value is None or value == "":
            continue
        if spec.enum is not None and value not in spec.enum:
            report.errors.append((name, f"must be one of {', '.join(spec.enum)}"))
            continue
        if spec.boolean:
            if value not in (True, False, 0, 1, "0", "1"):
                report.errors.append((name, "must be a boolean flag"))
                continue
            report.normalized[name] = value in (True, 1, "1")
            continue
        if spec.numeric:
            if not _is_int(value):
                report.errors.append((name, "must be an integer"))
                continue
            number = int(value)
            if spec.min_value is not None and number < spec.min_value:
                report.errors.append((name, f"must be >= {spec.min_value}"))
                continue
            report.normalized[name] = number
            continue
        if spec.decimal:
            if not _is_number(value):
                report.errors.append((name, "must be a number"))
                continue
            report.normalized[name] = float(value)
            continue
        if not isinstance(value, str):
            report.errors.append((name, "must be text"))
            continue
        if spec.max_len is not None and len(value) > spec.max_len:
            # Reject, never truncate.
            report.errors.append((name, f"longer than {spec.max_len} characters"))
            continue
        report.normalized[name] = value

    if not partial:
        for spec in FIELD_SPECS[kind]:
            if spec.name in report.normalized:
                continue
            given = values.get(spec.name)
            if given not in (None, ""):
                continue  # already reported above
            if spec.with_default():
                report.normalized[spec.name] = spec.default
            elif spec.required:
                report.errors.append((spec.name, "is required"))
    return report


@dataclass(frozen=True)
class AssetGroupLink:
    """One master-to-child edge of an asset group."""

    master_id: int
    child_id: int
    group_type: str = "Group"


def _reachable(start: int, edges: set[tuple[int, int]]) -> set[int]:
    seen: set[int] = set()
    stack = [start]
    while stack:
        node = stack.pop()
        for master, child in edges:
            if master == node and child not in seen:
                seen.add(child)
                stack.append(child)
    return seen


def make_group(master: int, children, group_type: str = "Group",
               existing=()) -> list[AssetGroupLink]:
    """Build master->child links, refusing self references and cycles.

    ``existing`` carries the already persisted (master, child) pairs the
    acyclicity check must honour.
    """
    children = list(dict.fromkeys(children))
    if not children:
        raise EmptyChildren("At least one asset has to be selected")
    if master in children:
        raise SelfLink(f"asset {master} cannot be its own child")
    if group_type not in GROUP_TYPES:
        raise UnknownKind(f"unknown group type: {group_type}")

    edges = {(int(m), int(c)) for m, c in existing}
    for child in children:
        # A child that (indirectly) masters the master would close a loop.
        if master in _reachable(child, edges) or child == master:
            raise CycleDetected(f"asset {child} already contains {master}")
        edges.add((master, child))
    return [AssetGroupLink(master, child, group_type) for child in children]


# Asset fields captured by a history snapshot, in storage column order.
HISTORY_FIELDS = (
    "asset_id", "barcode", "serial", "location_id", "asset_type",
    "description", "status", "color", "material", "brand", "host",
    "purchase_no", "request_no", "created_date",
)


@dataclass(frozen=True)
class HistoryRecord:
    """Full-text snapshot of an asset, stamped with who touched it."""

    fields: dict
    modified_by: str
    recorded_at: str

    def value(self, name: str) -> str:
        return self.fields.get(name, "")


def as_text(value) -> str:
    if value is None:
        return ""
    if value is True:
        return "1"
    if value is False:
        return "0"
    return str(value)


def snapshot_of(asset: dict, modified_by: str, now: datetime | None = None) -> HistoryRecord:
    """Copy every asset field into a text snapshot."""
    moment = (now or datetime.now()).strftime("%Y-%m-%d %H:%M:%S")
    values = {name: as_text(asset.get(name)) for name in HISTORY_FIELDS}
    return HistoryRecord(fields=values, modified_by=modified_by, recorded_at=moment)
