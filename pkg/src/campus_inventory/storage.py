"""Relational store for all entities and junction relations.

Backed by sqlite through parameterized SQL only; the DDL lives in
schema.sql.  Asset mutations capture full history snapshots, deletes are
soft (persons, licenses, requests) or archive-with-history (assets).
All mutations run inside a single serialized transaction per store, so
uniqueness and quota checks are atomic with their writes.
"""

from __future__ import annotations

import hashlib
import sqlite3
import threading
from contextlib import contextmanager
from dataclasses import dataclass
from datetime import datetime
from importlib import resources

from . import domain
from .errors import (
    BadPage,
    CycleDetected,
    DuplicateBarcode,
    DuplicateLink,
    DuplicateUsername,
    ForeignKeyMissing,
    HasDependents,
    ImmutableField,
    NotFound,
    QuotaExceeded,
    SelfLink,
    UnknownKind,
    ValidationFailed,
)

PAGE_SIZES = (15, 50, 100, 150, 200)


@dataclass
class Page:
    """Listing window: size, index, ordering and type filter."""

    page_size: int = 15
    page_index: int = 1
    sort_column: str | None = None
    sort_dir: str = "asc"
    filter_type: str | None = None


KIND_TABLES = {
    "asset": "assets",
    "license": "licenses",
    "location": "locations",
    "person": "person",
    "request": "request",
    "building": "building",
    "faculty": "fac_dep",
}

ID_COLUMNS = {
    "asset": "Asset_ID",
    "license": "License_ID",
    "location": "Location_ID",
    "person": "Person_ID",
    "request": "Request_ID",
    "building": "Building_ID",
    "faculty": "Fac_dep_ID",
}

# field name -> physical column, per kind
COLUMNS: dict[str, dict[str, str]] = {
    "asset": {
        "asset_id": "Asset_ID", "barcode": "BarcodeNum", "serial": "SerialNum",
        "location_id": "Location_ID", "asset_type": "Type",
        "description": "Description", "status": "Status", "color": "Color",
        "material": "Material", "brand": "Brand", "host": "Host",
        "created_date": "Created_date", "purchase_no": "PurchaseNo",
        "request_no": "RequestNo",
    },
    "license": {
        "license_id": "License_ID", "asset_id": "Asset_ID", "name": "Name",
        "license_type": "Type", "licence_counter": "Licence_counter",
        "price": "Price", "term": "Term", "licence_company": "Licence_company",
        "creation_date": "Creation_date", "deleted_date": "Deleted_date",
        "purchase_no": "PurchaseNo", "request_no": "RequestNo",
    },
    "location": {
        "location_id": "Location_ID", "capacity": "Capacity",
        "location_type": "Type", "belong_to": "Belong_to",
        "description": "Description", "location_num": "LocationNum",
        "key_num": "KeyNum", "code_num": "CodeNum", "width": "Width",
        "length": "Length",
    },
    "person": {
        "person_id": "Person_ID", "first_name": "FirstName",
        "last_name": "LastName", "username": "UserName",
        "password_digest": "Password", "address": "Address",
        "email": "EmailAddress", "mobile": "MobileNumber",
        "person_code": "PersonCode", "status": "Status",
        "person_type": "Type", "check_biometric": "Check_Biometric",
        "created_date": "Created_date", "delete_date": "Delete_date",
    },
    "request": {
        "request_id": "Request_ID", "requested_by": "Requested_by_ID",
        "location_to": "Location_to_ID", "request_type": "Type",
        "description": "Description", "status": "Status",
        "creation_date": "Creation_Date", "delete_date": "Delete_date",
        "period": "Period",
    },
    "building": {
        "building_id": "Building_ID", "address": "Address", "name": "Name",
        "size_class": "Type", "floor_num": "FloorNum",
    },
    "faculty": {
        "fac_dep_id": "Fac_dep_ID", "building": "Building", "name": "Name",
        "kind": "Type", "belong_to": "Belong_to",
    },
}

CREATED_COLUMN = {
    "asset": "Created_date",
    "license": "Creation_date",
    "person": "Created_date",
    "request": "Creation_Date",
}

# rows excluded from active reads
ACTIVE_GUARD = {
    "license": "Deleted_date IS NULL",
    "person": "Status != 'deleted'",
    "request": "Delete_date IS NULL",
}

# person password digests are never projected by reads or searches
SEARCHABLE: dict[str, tuple[str, ...]] = {
    "person": (
        "Person_ID", "FirstName", "LastName", "UserName", "Address",
        "EmailAddress", "MobileNumber", "PersonCode", "Status", "Type",
        "Check_Biometric", "Created_date", "Delete_date",
    ),
    "assets": (
        "Asset_ID", "BarcodeNum", "SerialNum", "Location_ID", "Type",
        "Description", "Status", "Color", "Material", "Brand", "Host",
        "Created_date", "PurchaseNo", "RequestNo",
    ),
    "locations": (
        "Location_ID", "Capacity", "Type", "Belong_to", "Description",
        "LocationNum", "KeyNum", "CodeNum", "Width", "Length",
    ),
    "licenses": (
        "License_ID", "Asset_ID", "Name", "Type", "Licence_counter",
        "Price", "Term", "Licence_company", "Creation_date", "Deleted_date",
        "PurchaseNo", "RequestNo",
    ),
}

# the free-text subset backing basic search
TEXT_COLUMNS: dict[str, tuple[str, ...]] = {
    "person": ("FirstName", "LastName", "UserName", "Address", "EmailAddress",
               "MobileNumber", "PersonCode", "Status", "Type"),
    "assets": ("BarcodeNum", "SerialNum", "Type", "Description", "Status",
               "Color", "Material", "Brand", "Host", "PurchaseNo", "RequestNo"),
    "locations": ("Type", "Description", "LocationNum", "Width", "Length"),
    "licenses": ("Name", "Type", "Term", "Licence_company", "PurchaseNo",
                 "RequestNo"),
}

SEARCH_ACTIVE_GUARD = {
    "person": "Status != 'deleted'",
    "licenses": "Deleted_date IS NULL",
}

HISTORY_COLUMNS = {
    "asset_id": "Asset_ID", "barcode": "BarcodeNum", "serial": "SerialNum",
    "location_id": "Location_ID", "asset_type": "Type",
    "description": "Description", "status": "Status", "color": "Color",
    "material": "Material", "brand": "Brand", "host": "Host",
    "purchase_no": "PurchaseNo", "request_no": "RequestNo",
    "created_date": "Created_date",
}

RELATION_KINDS = (
    "person_asset", "person_location", "person_role", "person_depart",
    "location_location", "license_asset", "location_department",
    "asset_group", "asset_location",
)


class Store:
    """One open inventory database."""

    def __init__(self, path: str = ":memory:", clock=None):
        self._conn = sqlite3.connect(path, check_same_thread=False)
        self._conn.isolation_level = None  # explicit BEGIN/COMMIT below
        self._lock = threading.RLock()
        self._txn = threading.local()
        self._clock = clock or datetime.now
        # Align SQL case folding with Python's so search semantics match
        # the documented case-insensitive containment exactly.
        self._conn.create_function(
            "lower", 1, lambda s: s.lower() if isinstance(s, str) else s)
        ddl = resources.files("campus_inventory").joinpath("schema.sql").read_text()
        self._conn.executescript(ddl)  # runs in its own autocommit scope

    def close(self):
        self._conn.close()

    # -- low level ------------------------------------------------------

    @contextmanager
    def transaction(self):
        """Serialized write scope; nests without re-entering BEGIN."""
        with self._lock:
            depth = getattr(self._txn, "depth", 0)
            if depth == 0:
                self._conn.execute("BEGIN")
            self._txn.depth = depth + 1
            try:
                yield
            except BaseException:
                self._txn.depth = depth
                if depth == 0:
                    self._conn.execute("ROLLBACK")
                raise
            else:
                self._txn.depth = depth
                if depth == 0:
                    self._conn.execute("COMMIT")

    def raw_select(self, sql: str, params=()) -> list[tuple]:
        with self._lock:
            return self._conn.execute(sql, tuple(params)).fetchall()

    def raw_execute(self, sql: str, params=()):
        with self.transaction():
            return self._conn.execute(sql, tuple(params))

    def raw_insert(self, table: str, values: dict) -> int:
        """Seed/migration plumbing; inserts column values verbatim."""
        cols = list(values)
        sql = "INSERT INTO {} ({}) VALUES ({})".format(
            table, ", ".join(cols), ", ".join("?" for _ in cols))
        with self.transaction():
            cur = self._conn.execute(sql, [values[c] for c in cols])
            return cur.lastrowid

    def current_time(self):
        return self._clock()

    def now(self) -> str:
        return self._clock().strftime("%Y-%m-%d %H:%M:%S")

    def today(self) -> str:
        return self._clock().strftime("%Y-%m-%d")

    # -- introspection ----------------------------------------------------

    def schema_catalog(self) -> dict[str, tuple[str, ...]]:
        """Searchable tables and their projectable columns."""
        return dict(SEARCHABLE)

    def row_counts(self) -> dict[str, int]:
        tables = [r[0] for r in self.raw_select(
            "SELECT name FROM sqlite_master WHERE type='table' "
            "AND name NOT LIKE 'sqlite_%' ORDER BY name")]
        return {t: self.raw_select(f"SELECT COUNT(*) FROM {t}")[0][0] for t in tables}

    def content_hash(self) -> str:
        """Digest of every user table's full contents."""
        digest = hashlib.sha256()
        tables = [r[0] for r in self.raw_select(
            "SELECT name FROM sqlite_master WHERE type='table' "
            "AND name NOT LIKE 'sqlite_%' ORDER BY name")]
        for table in tables:
            digest.update(table.encode())
            for row in self.raw_select(f"SELECT * FROM {table} ORDER BY rowid"):
                digest.update(repr(row).encode())
        return digest.hexdigest()

    # -- records ----------------------------------------------------------

    def _check_kind(self, kind: str):
        if kind not in KIND_TABLES:
            raise UnknownKind(f"unknown entity kind: {kind}")

    def _row_to_entity(self, kind: str, row: tuple, cols: list[str]) -> dict:
        colmap = {col: name for name, col in COLUMNS[kind].items()}
        entity = {}
        for col, value in zip(cols, row):
            name = colmap.get(col)
            if name is None or name == "password_digest":
                continue
            if name == "check_biometric":
                value = bool(value)
            entity[name] = value
        return entity

    def _fetch(self, kind: str, record_id: int, *, active_only=True) -> dict | None:
        table, id_col = KIND_TABLES[kind], ID_COLUMNS[kind]
        guard = ACTIVE_GUARD.get(kind)
        sql = f"SELECT * FROM {table} WHERE {id_col} = ?"
        if active_only and guard:
            sql += f" AND {guard}"
        with self._lock:
            cur = self._conn.execute(sql, (record_id,))
            row = cur.fetchone()
            if row is None:
                return None
            cols = [d[0] for d in cur.description]
        entity = self._row_to_entity(kind, row, cols)
        if kind == "location":
            plan = self.raw_select(
                "SELECT Plan FROM location_plan WHERE Plan_of_Location_ID = ? "
                "ORDER BY Plan_ID DESC LIMIT 1", (record_id,))
            entity["plan"] = plan[0][0] if plan else None
        return entity

    def get_record(self, kind: str, record_id: int) -> dict | None:
        """Active record or None; archived and deleted rows stay hidden."""
        self._check_kind(kind)
        return self._fetch(kind, record_id)

    def _exists(self, kind: str, record_id) -> bool:
        if record_id is None:
            return False
        return self._fetch(kind, record_id) is not None

    def _require_fk(self, kind: str, record_id, field: str):
        if record_id is None:
            return
        if not self._exists(kind, record_id):
            raise ForeignKeyMissing(f"{field}: no active {kind} {record_id}")

    def _check_references(self, kind: str, values: dict, *, record_id=None):
        if kind == "asset":
            self._require_fk("location", values.get("location_id"), "location_id")
        elif kind == "license":
            self._require_fk("asset", values.get("asset_id"), "asset_id")
        elif kind == "location":
            parent = values.get("belong_to")
            self._require_fk("location", parent, "belong_to")
            if parent is not None and record_id is not None:
                self._check_location_cycle(record_id, parent)
        elif kind == "request":
            self._require_fk("location", values.get("location_to"), "location_to")
            self._require_fk("person", values.get("requested_by"), "requested_by")
        elif kind == "faculty":
            self._require_fk("building", values.get("building"), "building")
            parent = values.get("belong_to")
            if parent is not None:
                row = self._fetch("faculty", parent)
                if row is None:
                    raise ForeignKeyMissing(f"belong_to: no faculty {parent}")
                if row["kind"] != "Faculty":
                    raise ValidationFailed(
                        "belong_to must reference a Faculty",
                        field_errors={"belong_to": "must reference a Faculty"},
                        submitted=values)

    def _check_location_cycle(self, location_id: int, parent: int):
        seen = set()
        node = parent
        while node is not None:
            if node == location_id:
                raise CycleDetected(f"location {parent} is contained in {location_id}")
            if node in seen:
                break
            seen.add(node)
            rows = self.raw_select(
                "SELECT Belong_to FROM locations WHERE Location_ID = ?", (node,))
            node = rows[0][0] if rows else None

    def _barcode_taken(self, barcode: str, *, except_id=None) -> bool:
        sql = "SELECT Asset_ID FROM assets WHERE BarcodeNum = ?"
        params: list = [barcode]
        if except_id is not None:
            sql += " AND Asset_ID != ?"
            params.append(except_id)
        return bool(self.raw_select(sql, params))

    def _username_taken(self, username: str, *, except_id=None) -> bool:
        sql = "SELECT Person_ID FROM person WHERE UserName = ? AND Status != 'deleted'"
        params: list = [username]
        if except_id is not None:
            sql += " AND Person_ID != ?"
            params.append(except_id)
        return bool(self.raw_select(sql, params))

    def create_record(self, kind: str, fields: dict, actor: str) -> int:
        """Validate and persist a new record; assets get a first snapshot."""
        self._check_kind(kind)
        report = domain.validate_entity(kind, fields)
        if not report.ok:
            raise ValidationFailed(field_errors=report.error_map(), submitted=fields)
        values = report.normalized

        with self.transaction():
            self._check_references(kind, values)
            if kind == "asset" and values.get("barcode"):
                if self._barcode_taken(values["barcode"]):
                    raise DuplicateBarcode("Duplicate barcode in the system")
            if kind == "person":
                if self._username_taken(values["username"]):
                    raise DuplicateUsername(
                        f"username {values['username']!r} is already in use")

            plan = values.pop("plan", None) if kind == "location" else None
            created_col = CREATED_COLUMN.get(kind)
            colmap = COLUMNS[kind]
            row = {colmap[name]: value for name, value in values.items()
                   if value is not None and name in colmap}
            if created_col:
                row[created_col] = self.now()
            cols = list(row)
            sql = "INSERT INTO {} ({}) VALUES ({})".format(
                KIND_TABLES[kind], ", ".join(cols), ", ".join("?" for _ in cols))
            try:
                cur = self._conn.execute(sql, [row[c] for c in cols])
            except sqlite3.IntegrityError as exc:
                if "uq_assets_barcode" in str(exc):
                    raise DuplicateBarcode("Duplicate barcode in the system") from exc
                if "uq_person_username" in str(exc):
                    raise DuplicateUsername("username is already in use") from exc
                raise
            record_id = cur.lastrowid
            if plan is not None:
                self._conn.execute(
                    "INSERT INTO location_plan (Plan_of_Location_ID, Plan) VALUES (?, ?)",
                    (record_id, plan))
            if kind == "asset":
                self._write_snapshot(record_id, actor)
            return record_id

    def _write_snapshot(self, asset_id: int, actor: str):
        asset = self._fetch("asset", asset_id)
        record = domain.snapshot_of(asset, actor, now=self._clock())
        row = {HISTORY_COLUMNS[name]: record.fields[name] for name in domain.HISTORY_FIELDS}
        row["Modified_by"] = record.modified_by
        row["Recorded_at"] = record.recorded_at
        cols = list(row)
        self._conn.execute(
            "INSERT INTO assets_history ({}) VALUES ({})".format(
                ", ".join(cols), ", ".join("?" for _ in cols)),
            [row[c] for c in cols])

    def update_record(self, kind: str, record_id: int, changes: dict, actor: str) -> dict:
        """Merge a change-set into an active record.

        Asset updates that change anything append exactly one history
        record carrying the actor; empty effective change-sets are no-ops.
        """
        self._check_kind(kind)
        with self.transaction():
            current = self._fetch(kind, record_id)
            if current is None:
                raise NotFound(f"no active {kind} {record_id}")

            frozen = {s.name for s in domain.FIELD_SPECS[kind] if s.immutable}
            if kind == "request":
                frozen |= {"status"}  # transitions belong to the workflow
            alias = domain.TYPE_FIELD.get(kind)
            touched = set(changes)
            if alias and "type" in touched:
                touched.discard("type")
                touched.add(alias)
            hit = sorted(touched & frozen)
            if hit:
                raise ImmutableField(f"cannot change: {', '.join(hit)}")

            report = domain.validate_entity(kind, changes, partial=True)
            if not report.ok:
                raise ValidationFailed(field_errors=report.error_map(), submitted=changes)
            merged = dict(current)
            merged.update(report.normalized)
            # explicit None in the change-set clears an optional field
            for name, value in changes.items():
                if value is None and name in merged:
                    merged[name] = None
            specs = domain.FIELD_SPECS[kind]
            client_fields = {s.name for s in specs if not s.server_set}
            full = domain.validate_entity(
                kind, {k: v for k, v in merged.items() if k in client_fields})
            if not full.ok:
                raise ValidationFailed(field_errors=full.error_map(), submitted=changes)

            effective = {name: value for name, value in merged.items()
                         if name in current and current.get(name) != value}
            if kind == "person" and changes.get("password_digest") is not None:
                # digests are stripped from reads, so diff them explicitly
                effective["password_digest"] = changes["password_digest"]
            if not effective:
                return current

            self._check_references(kind, effective, record_id=record_id)
            if kind == "asset" and "barcode" in effective and effective["barcode"]:
                if self._barcode_taken(effective["barcode"], except_id=record_id):
                    raise DuplicateBarcode("Duplicate barcode in the system")
            if kind == "person" and "username" in effective:
                if self._username_taken(effective["username"], except_id=record_id):
                    raise DuplicateUsername("username is already in use")

            plan_change = effective.pop("plan", None) if kind == "location" else None
            colmap = COLUMNS[kind]
            sets = {colmap[name]: value for name, value in effective.items()
                    if name in colmap}
            if sets:
                assignments = ", ".join(f"{col} = ?" for col in sets)
                self._conn.execute(
                    f"UPDATE {KIND_TABLES[kind]} SET {assignments} "
                    f"WHERE {ID_COLUMNS[kind]} = ?",
                    [*sets.values(), record_id])
            if plan_change is not None:
                self._conn.execute(
                    "DELETE FROM location_plan WHERE Plan_of_Location_ID = ?",
                    (record_id,))
                self._conn.execute(
                    "INSERT INTO location_plan (Plan_of_Location_ID, Plan) VALUES (?, ?)",
                    (record_id, plan_change))
            if kind == "asset" and (sets or plan_change is not None):
                self._write_snapshot(record_id, actor)
            return self._fetch(kind, record_id)

    def soft_delete(self, kind: str, record_id: int, actor: str):
        """Remove a record from the active set, keeping its audit trail."""
        self._check_kind(kind)
        with self.transaction():
            current = self._fetch(kind, record_id)
            if current is None:
                raise NotFound(f"no active {kind} {record_id}")
            table, id_col = KIND_TABLES[kind], ID_COLUMNS[kind]

            if kind == "asset":
                self._write_snapshot(record_id, actor)
                self._conn.execute(f"DELETE FROM {table} WHERE {id_col} = ?", (record_id,))
                self._conn.execute(
                    "DELETE FROM assets_group WHERE Asset_master_ID = ? OR Asset_child_ID = ?",
                    (record_id, record_id))
                self._conn.execute(
                    "DELETE FROM person_assets WHERE Asset_ID = ?", (record_id,))
                self._conn.execute(
                    "DELETE FROM license_assets WHERE Asset_ID = ?", (record_id,))
                self._conn.execute(
                    "DELETE FROM sub_group WHERE Asset_ID = ?", (record_id,))
            elif kind == "person":
                self._conn.execute(
                    "UPDATE person SET Status = 'deleted', Delete_date = ? "
                    "WHERE Person_ID = ?", (self.today(), record_id))
            elif kind == "license":
                self._conn.execute(
                    "UPDATE licenses SET Deleted_date = ? WHERE License_ID = ?",
                    (self.today(), record_id))
            elif kind == "request":
                self._conn.execute(
                    "UPDATE request SET Delete_date = ? WHERE Request_ID = ?",
                    (self.today(), record_id))
            elif kind == "location":
                dependents = (
                    self.raw_select(
                        "SELECT COUNT(*) FROM assets WHERE Location_ID = ?",
                        (record_id,))[0][0]
                    + self.raw_select(
                        "SELECT COUNT(*) FROM locations WHERE Belong_to = ?",
                        (record_id,))[0][0]
                    + self.raw_select(
                        "SELECT COUNT(*) FROM location_location "
                        "WHERE Location_master_ID = ?", (record_id,))[0][0]
                )
                if dependents:
                    raise HasDependents(
                        f"location {record_id} still holds assets or locations")
                self._conn.execute("DELETE FROM locations WHERE Location_ID = ?",
                                   (record_id,))
                self._conn.execute(
                    "DELETE FROM location_plan WHERE Plan_of_Location_ID = ?",
                    (record_id,))
                self._conn.execute(
                    "DELETE FROM person_location WHERE Location_ID = ?", (record_id,))
                self._conn.execute(
                    "DELETE FROM location_department WHERE Location_ID = ?", (record_id,))
                self._conn.execute(
                    "DELETE FROM location_location WHERE Location_child_ID = ?",
                    (record_id,))
            else:
                self._conn.execute(f"DELETE FROM {table} WHERE {id_col} = ?", (record_id,))

    # -- listings ---------------------------------------------------------

    def list_records(self, kind: str, page: Page) -> tuple[list[dict], int]:
        """One sorted, filtered page plus the filtered total."""
        self._check_kind(kind)
        if page.page_size not in PAGE_SIZES:
            raise BadPage(f"page_size must be one of {PAGE_SIZES}")
        if page.page_index < 1:
            raise BadPage("page must be >= 1")
        if page.sort_dir not in ("asc", "desc"):
            raise BadPage("sort direction must be asc or desc")

        table, id_col = KIND_TABLES[kind], ID_COLUMNS[kind]
        colmap = COLUMNS[kind]
        where, params = [], []
        guard = ACTIVE_GUARD.get(kind)
        if guard:
            where.append(guard)
        if page.filter_type is not None:
            type_field = domain.TYPE_FIELD.get(kind)
            if type_field is None:
                raise BadPage(f"{kind} listings have no type filter")
            where.append(f"{colmap[type_field]} = ?")
            params.append(page.filter_type)

        order = f"{id_col} ASC"
        if page.sort_column:
            name = page.sort_column
            if name == "type" and kind in domain.TYPE_FIELD:
                name = domain.TYPE_FIELD[kind]
            col = colmap.get(name)
            if col is None:
                raise BadPage(f"unknown sort column: {page.sort_column}")
            order = f"{col} {page.sort_dir.upper()}, {id_col} ASC"

        clause = f" WHERE {' AND '.join(where)}" if where else ""
        with self._lock:
            total = self._conn.execute(
                f"SELECT COUNT(*) FROM {table}{clause}", params).fetchone()[0]
            cur = self._conn.execute(
                f"SELECT * FROM {table}{clause} ORDER BY {order} LIMIT ? OFFSET ?",
                [*params, page.page_size, (page.page_index - 1) * page.page_size])
            cols = [d[0] for d in cur.description]
            rows = [self._row_to_entity(kind, row, cols) for row in cur.fetchall()]
        return rows, total

    # -- relations ----------------------------------------------------------

    def link(self, relation: str, from_id, to_id, attrs: dict | None = None,
             actor: str = "system"):
        """Persist one relation edge; see RELATION_KINDS for directions."""
        if relation not in RELATION_KINDS:
            raise UnknownKind(f"unknown relation: {relation}")
        attrs = dict(attrs or {})
        with self.transaction():
            handler = getattr(self, f"_link_{relation}")
            handler(from_id, to_id, attrs, actor)

    def _require_active(self, kind, record_id, side):
        if not self._exists(kind, record_id):
            raise NotFound(f"{side}: no active {kind} {record_id}")

    def _dup_check(self, sql, params):
        if self.raw_select(sql, params):
            raise DuplicateLink("this link already exists")

    def _link_person_asset(self, person_id, asset_id, attrs, actor):
        self._require_active("person", person_id, "from_id")
        self._require_active("asset", asset_id, "to_id")
        link_type = attrs.get("type", "assigned")
        self._dup_check(
            "SELECT 1 FROM person_assets WHERE Person_ID = ? AND Asset_ID = ? AND Type = ?",
            (person_id, asset_id, link_type))
        self._conn.execute(
            "INSERT INTO person_assets (Asset_ID, Person_ID, Type, Check_in_Date, Due_date) "
            "VALUES (?, ?, ?, ?, ?)",
            (asset_id, person_id, link_type, self.now(), attrs.get("due_date")))

    def _link_person_location(self, person_id, location_id, attrs, actor):
        self._require_active("person", person_id, "from_id")
        self._require_active("location", location_id, "to_id")
        link_type = attrs.get("type", "belong")
        if link_type not in domain.PERSON_LOCATION_TYPES:
            raise ValidationFailed(field_errors={"type": "unknown relation type"},
                                   submitted=attrs)
        self._dup_check(
            "SELECT 1 FROM person_location WHERE Person_ID = ? AND Location_ID = ? AND Type = ?",
            (person_id, location_id, link_type))
        self._conn.execute(
            "INSERT INTO person_location (Location_ID, Person_ID, Type) VALUES (?, ?, ?)",
            (location_id, person_id, link_type))

    def _link_person_role(self, person_id, role_id, attrs, actor):
        self._require_active("person", person_id, "from_id")
        if not self.raw_select("SELECT 1 FROM roles WHERE Role_ID = ?", (role_id,)):
            raise NotFound(f"no role {role_id!r}")
        self._dup_check(
            "SELECT 1 FROM person_roles WHERE Person_ID = ? AND Role_ID = ?",
            (person_id, role_id))
        self._conn.execute(
            "INSERT INTO person_roles (Role_ID, Person_ID) VALUES (?, ?)",
            (role_id, person_id))

    def _link_person_depart(self, person_id, fac_dep_id, attrs, actor):
        self._require_active("person", person_id, "from_id")
        self._require_active("faculty", fac_dep_id, "to_id")
        link_type = attrs.get("type", "study_in")
        if link_type not in domain.PERSON_DEPART_TYPES:
            raise ValidationFailed(field_errors={"type": "unknown relation type"},
                                   submitted=attrs)
        self._dup_check(
            "SELECT 1 FROM person_depart WHERE Person_ID = ? AND Fac_Dep_ID = ? AND Type = ?",
            (person_id, fac_dep_id, link_type))
        self._conn.execute(
            "INSERT INTO person_depart (Fac_Dep_ID, Person_ID, Type) VALUES (?, ?, ?)",
            (fac_dep_id, person_id, link_type))

    def _link_location_location(self, master_id, child_id, attrs, actor):
        self._require_active("location", master_id, "from_id")
        self._require_active("location", child_id, "to_id")
        if master_id == child_id:
            raise SelfLink("a location cannot contain itself")
        relation_type = attrs.get("type", "contain")
        if relation_type not in domain.LOCATION_RELATION_TYPES:
            raise ValidationFailed(field_errors={"type": "unknown relation type"},
                                   submitted=attrs)
        edges = {(m, c) for m, c in self.raw_select(
            "SELECT Location_master_ID, Location_child_ID FROM location_location")}
        if master_id in domain._reachable(child_id, edges):
            raise CycleDetected(f"location {child_id} already contains {master_id}")
        self._dup_check(
            "SELECT 1 FROM location_location WHERE Location_master_ID = ? "
            "AND Location_child_ID = ? AND Relation_type = ?",
            (master_id, child_id, relation_type))
        self._conn.execute(
            "INSERT INTO location_location (Location_master_ID, Location_child_ID, "
            "Relation_type) VALUES (?, ?, ?)", (master_id, child_id, relation_type))

    def _link_license_asset(self, license_id, asset_id, attrs, actor):
        license_row = self._fetch("license", license_id)
        if license_row is None:
            raise NotFound(f"from_id: no active license {license_id}")
        self._require_active("asset", asset_id, "to_id")
        self._dup_check(
            "SELECT 1 FROM license_assets WHERE License_ID = ? AND Asset_ID = ?",
            (license_id, asset_id))
        if license_row.get("license_type") == "Quantity":
            seats = license_row.get("licence_counter") or 0
            used = self.raw_select(
                "SELECT COUNT(*) FROM license_assets WHERE License_ID = ?",
                (license_id,))[0][0]
            if used >= seats:
                raise QuotaExceeded(
                    f"license {license_id} has only {seats} seat(s)")
        self._conn.execute(
            "INSERT INTO license_assets (License_ID, Asset_ID) VALUES (?, ?)",
            (license_id, asset_id))

    def _link_location_department(self, location_id, fac_dep_id, attrs, actor):
        self._require_active("location", location_id, "from_id")
        self._require_active("faculty", fac_dep_id, "to_id")
        self._dup_check(
            "SELECT 1 FROM location_department WHERE Location_ID = ? AND Fac_Dep_ID = ?",
            (location_id, fac_dep_id))
        self._conn.execute(
            "INSERT INTO location_department (Location_ID, Fac_Dep_ID) VALUES (?, ?)",
            (location_id, fac_dep_id))

    def _link_asset_group(self, master_id, child_id, attrs, actor):
        self._require_active("asset", master_id, "from_id")
        self._require_active("asset", child_id, "to_id")
        group_type = attrs.get("type", "Group")
        links = domain.make_group(master_id, [child_id], group_type,
                                  existing=self.group_pairs(exclude_child=(child_id, group_type)))
        # re-parenting replaces the previous master for this group type
        self._conn.execute(
            "DELETE FROM assets_group WHERE Asset_child_ID = ? AND Type = ?",
            (child_id, group_type))
        for link in links:
            self._conn.execute(
                "INSERT INTO assets_group (Asset_master_ID, Asset_child_ID, Type) "
                "VALUES (?, ?, ?)", (link.master_id, link.child_id, link.group_type))

    def _link_asset_location(self, asset_id, location_id, attrs, actor):
        # assignment lives on the asset row itself; history records the move
        self.update_record("asset", asset_id, {"location_id": location_id}, actor)

    def group_pairs(self, exclude_child: tuple[int, str] | None = None) -> list[tuple[int, int]]:
        sql = "SELECT Asset_master_ID, Asset_child_ID FROM assets_group"
        params: list = []
        if exclude_child:
            sql += " WHERE NOT (Asset_child_ID = ? AND Type = ?)"
            params = list(exclude_child)
        return [tuple(r) for r in self.raw_select(sql, params)]

    def create_group(self, master_id: int, children, group_type: str,
                     actor: str = "system") -> int:
        """Group several child assets under one master."""
        children = list(children)
        with self.transaction():
            self._require_active("asset", master_id, "master")
            for child in children:
                self._require_active("asset", child, "child")
            links = domain.make_group(master_id, children, group_type,
                                      existing=self.group_pairs())
            for link in links:
                self._conn.execute(
                    "DELETE FROM assets_group WHERE Asset_child_ID = ? AND Type = ?",
                    (link.child_id, group_type))
                self._conn.execute(
                    "INSERT INTO assets_group (Asset_master_ID, Asset_child_ID, Type) "
                    "VALUES (?, ?, ?)", (link.master_id, link.child_id, link.group_type))
            return len(links)

    def links(self, relation: str, from_id=None, to_id=None) -> list[dict]:
        """Read back relation rows (column names as stored)."""
        queries = {
            "person_asset": ("person_assets", "Person_ID", "Asset_ID"),
            "person_location": ("person_location", "Person_ID", "Location_ID"),
            "person_role": ("person_roles", "Person_ID", "Role_ID"),
            "person_depart": ("person_depart", "Person_ID", "Fac_Dep_ID"),
            "location_location": ("location_location", "Location_master_ID",
                                  "Location_child_ID"),
            "license_asset": ("license_assets", "License_ID", "Asset_ID"),
            "location_department": ("location_department", "Location_ID", "Fac_Dep_ID"),
            "asset_group": ("assets_group", "Asset_master_ID", "Asset_child_ID"),
        }
        if relation not in queries:
            raise UnknownKind(f"unknown relation: {relation}")
        table, from_col, to_col = queries[relation]
        where, params = [], []
        if from_id is not None:
            where.append(f"{from_col} = ?")
            params.append(from_id)
        if to_id is not None:
            where.append(f"{to_col} = ?")
            params.append(to_id)
        clause = f" WHERE {' AND '.join(where)}" if where else ""
        with self._lock:
            cur = self._conn.execute(f"SELECT * FROM {table}{clause} ORDER BY rowid", params)
            cols = [d[0] for d in cur.description]
            return [dict(zip(cols, row)) for row in cur.fetchall()]

    # -- history ------------------------------------------------------------

    def history_of(self, asset_id: int) -> list[dict]:
        """All snapshots of an asset, oldest first."""
        with self._lock:
            cur = self._conn.execute(
                "SELECT * FROM assets_history WHERE Asset_ID = ? ORDER BY rowid",
                (asset_id,))
            cols = [d[0] for d in cur.description]
            rows = cur.fetchall()
        if not rows:
            if not self._exists("asset", asset_id):
                raise NotFound(f"asset {asset_id} never existed")
            return []
        colmap = {col: name for name, col in HISTORY_COLUMNS.items()}
        colmap["Modified_by"] = "modified_by"
        colmap["Recorded_at"] = "recorded_at"
        out = []
        for row in rows:
            rec = {}
            for col, value in zip(cols, row):
                name = colmap.get(col)
                if name:
                    rec[name] = value
            out.append(rec)
        return out

    # -- workflow plumbing ----------------------------------------------------

    def add_batch_item(self, request_id: int, asset_id, item_type: str):
        self._conn.execute(
            "INSERT INTO batch_request (Request_ID, Asset_ID, Type) VALUES (?, ?, ?)",
            (request_id, asset_id, item_type))

    def items_of(self, request_id: int) -> list[dict]:
        rows = self.raw_select(
            "SELECT Asset_ID, Type FROM batch_request WHERE Request_ID = ? ORDER BY rowid",
            (request_id,))
        return [{"asset_id": r[0], "item_type": r[1]} for r in rows]

    def add_approval(self, request_id: int, person_id: int, level: str):
        self._conn.execute(
            "INSERT INTO approved_by (Request_ID, Person_ID, Approval_level, Approved_Date) "
            "VALUES (?, ?, ?, ?)", (request_id, person_id, level, self.now()))

    def approvals_of(self, request_id: int) -> list[dict]:
        rows = self.raw_select(
            "SELECT Person_ID, Approval_level, Approved_Date FROM approved_by "
            "WHERE Request_ID = ? ORDER BY rowid", (request_id,))
        return [{"person_id": r[0], "level": r[1], "approved_date": r[2]} for r in rows]

    def clear_approvals(self, request_id: int):
        self._conn.execute("DELETE FROM approved_by WHERE Request_ID = ?", (request_id,))

    def set_request_status(self, request_id: int, status: str):
        if status not in domain.REQUEST_STATUSES:
            raise UnknownKind(f"unknown request status: {status}")
        self._conn.execute("UPDATE request SET Status = ? WHERE Request_ID = ?",
                           (status, request_id))

    def append_request_description(self, request_id: int, text: str):
        row = self.raw_select("SELECT Description FROM request WHERE Request_ID = ?",
                              (request_id,))
        current = row[0][0] if row and row[0][0] else ""
        merged = f"{current}\n{text}".strip() if current else text
        self._conn.execute("UPDATE request SET Description = ? WHERE Request_ID = ?",
                           (merged, request_id))

    def tag_subgroup(self, asset_id: int, tag: str):
        self._require_active("asset", asset_id, "asset")
        self._conn.execute("INSERT INTO sub_group (Asset_ID, sub_type) VALUES (?, ?)",
                           (asset_id, tag))
