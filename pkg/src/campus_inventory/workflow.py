"""Request lifecycle: create with batch items, approve, reject, complete.

Status only ever moves Not_Approved -> Approved | Rejected and
Approved -> Completed.  Approvals are recorded at the approver's level;
the request flips to Approved once a recorded level reaches the level
its type requires.  Completion applies the per-item side effects in one
transaction, so a failing item rolls everything back.
"""

from __future__ import annotations

from datetime import timedelta

from . import domain
from .access import AccessControl, Session, level_rank
from .errors import InvalidState, NotFound, SelfApproval, ValidationFailed
from .storage import Page, Store

# Acquisition (purchasing) needs higher sign-off than moves and repairs.
DEFAULT_REQUIRED_LEVELS = {
    "Movement": "Level1",
    "Reparation": "Level1",
    "Acquisition": "Level2",
}


class RequestWorkflow:
    """Operations over the request state machine."""

    def __init__(self, store: Store, access: AccessControl,
                 required_levels: dict[str, str] | None = None):
        self._store = store
        self._access = access
        self.required_levels = dict(required_levels or DEFAULT_REQUIRED_LEVELS)

    # -- creation ---------------------------------------------------------

    def create_request(self, session: Session, request_type: str, items=(),
                       location_to=None, description: str = "",
                       period=None) -> int:
        """File a new request with its batch items; starts Not_Approved."""
        self._access.require(session, "create", "request")
        items = [tuple(item) for item in items]
        errors = {}
        seen = set()
        for asset_id, item_type in items:
            if item_type not in domain.ITEM_TYPES:
                errors["items"] = f"unknown item type: {item_type}"
            elif item_type != "Buy" and asset_id is None:
                errors["items"] = f"{item_type} items need an asset"
            elif asset_id is not None and not self._store.get_record("asset", asset_id):
                errors["items"] = f"no active asset {asset_id}"
            elif asset_id is not None and asset_id in seen:
                errors["items"] = f"asset {asset_id} listed twice"
            if asset_id is not None:
                seen.add(asset_id)
        if errors:
            raise ValidationFailed(field_errors=errors,
                                   submitted={"items": items})

        with self._store.transaction():
            request_id = self._store.create_record("request", {
                "request_type": request_type,
                "requested_by": None,  # server-set below
                "location_to": location_to,
                "description": description,
                "period": period,
            }, actor=session.username)
            self._store.raw_execute(
                "UPDATE request SET Requested_by_ID = ? WHERE Request_ID = ?",
                (session.person_id, request_id))
            for asset_id, item_type in items:
                self._store.add_batch_item(request_id, asset_id, item_type)
        return request_id

    # -- transitions --------------------------------------------------------

    def _load(self, request_id: int) -> dict:
        record = self._store.get_record("request", request_id)
        if record is None:
            raise NotFound(f"no active request {request_id}")
        return record

    def approve(self, session: Session, request_id: int) -> dict:
        """Record an approval; enough authority flips the status."""
        self._access.require(session, "approve", "request")
        with self._store.transaction():
            record = self._load(request_id)
            if record["status"] != "Not_Approved":
                raise InvalidState(f"request is {record['status']}")
            if record["requested_by"] == session.person_id:
                raise SelfApproval("requesters cannot approve their own request")
            level = session.permissions.level
            recorded = {a["level"] for a in self._store.approvals_of(request_id)}
            if level in recorded:
                raise InvalidState(f"already approved at {level}")
            self._store.add_approval(request_id, session.person_id, level)
            required = self.required_levels[record["request_type"]]
            reached = any(level_rank(l) >= level_rank(required)
                          for l in recorded | {level})
            if reached:
                self._store.set_request_status(request_id, "Approved")
            return self._load(request_id)

    def reject(self, session: Session, request_id: int, reason: str = "") -> dict:
        """Close a pending request; partial approvals are discarded."""
        self._access.require(session, "approve", "request")
        with self._store.transaction():
            record = self._load(request_id)
            if record["status"] != "Not_Approved":
                raise InvalidState(f"request is {record['status']}")
            self._store.set_request_status(request_id, "Rejected")
            if reason:
                self._store.append_request_description(request_id, f"rejected: {reason}")
            self._store.clear_approvals(request_id)
            return self._load(request_id)

    def complete(self, session: Session, request_id: int) -> dict:
        """Apply the approved request: move, repair, archive or stub assets."""
        self._access.require(session, "complete", "request")
        with self._store.transaction():
            record = self._load(request_id)
            if record["status"] != "Approved":
                raise InvalidState(f"request is {record['status']}")
            actor = session.username
            for item in self._store.items_of(request_id):
                self._apply_item(record, item, actor)
            if record["period"]:
                self._record_due_dates(record, actor)
            self._store.set_request_status(request_id, "Completed")
            return self._load(request_id)

    def _apply_item(self, record: dict, item: dict, actor: str):
        asset_id, item_type = item["asset_id"], item["item_type"]
        location_to = record["location_to"]
        if item_type == "Move":
            if location_to is None:
                raise ValidationFailed(
                    field_errors={"location_to": "required to move assets"},
                    submitted={"request_id": record["request_id"]})
            self._store.link("asset_location", asset_id, location_to, actor=actor)
        elif item_type == "Repair":
            asset = self._store.get_record("asset", asset_id)
            if asset is None:
                raise NotFound(f"no active asset {asset_id}")
            if asset["status"] == "broken":
                self._store.update_record(
                    "asset", asset_id, {"status": "available"}, actor)
        elif item_type == "Delete":
            self._store.soft_delete("asset", asset_id, actor)
        elif item_type == "Buy":
            if location_to is None:
                raise ValidationFailed(
                    field_errors={"location_to": "required to receive purchases"},
                    submitted={"request_id": record["request_id"]})
            # stub pending receiving; the request number ties it back
            self._store.create_record("asset", {
                "asset_type": "Other",
                "location_id": location_to,
                "status": "not_available",
                "description": record["description"] or None,
                "request_no": str(record["request_id"]),
            }, actor)

    def _record_due_dates(self, record: dict, actor: str):
        """Borrow semantics: link moved assets to the requester with a due date."""
        completed_on = self._store.current_time()
        due = (completed_on + timedelta(days=record["period"])).strftime("%Y-%m-%d")
        for item in self._store.items_of(record["request_id"]):
            if item["item_type"] != "Move" or item["asset_id"] is None:
                continue
            if self._store.get_record("asset", item["asset_id"]) is None:
                continue
            self._store.link("person_asset", record["requested_by"],
                             item["asset_id"],
                             {"type": "borrowed", "due_date": due}, actor=actor)

    # -- listings -------------------------------------------------------------

    def list_requests(self, session: Session, scope: str = "mine",
                      page: Page | None = None) -> tuple[list[dict], int]:
        """Requests newest first; 'all' needs its own grant."""
        if scope not in ("mine", "all"):
            raise ValidationFailed(field_errors={"scope": "mine or all"},
                                   submitted={"scope": scope})
        if scope == "all":
            self._access.require(session, "view_all", "request")
            page = page or Page()
            if page.sort_column is None:
                page.sort_column = "creation_date"
                page.sort_dir = "desc"
            rows, total = self._store.list_records("request", page)
        else:
            if session is None:
                self._access.require(session, "create", "request")
            page = page or Page()
            ids = [r[0] for r in self._store.raw_select(
                "SELECT Request_ID FROM request "
                "WHERE Delete_date IS NULL AND Requested_by_ID = ? "
                "ORDER BY Creation_Date DESC, Request_ID ASC",
                (session.person_id,))]
            total = len(ids)
            window = ids[(page.page_index - 1) * page.page_size:
                         page.page_index * page.page_size]
            rows = [self._store.get_record("request", i) for i in window]
        for row in rows:
            row["items"] = self._store.items_of(row["request_id"])
            row["approvals"] = self._store.approvals_of(row["request_id"])
        return rows, total
