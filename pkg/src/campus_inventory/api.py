"""HTTP+JSON facade over the store, search engine, workflow and reports.

Controllers stay thin: parse parameters, check the session, call into the
modules, shape JSON.  Every failure is an envelope {code, message,
field_errors?, submitted?} with a stable machine code; form-style
submissions echo the submitted values back so clients can repopulate.
Sessions ride an http-only cookie, with a bearer header for scripts.
Pages the navigation tree exposes but the feature matrix leaves out
answer 501 not_implemented.
"""

from __future__ import annotations

import os
from datetime import timedelta

from fastapi import Body, FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import HTMLResponse, JSONResponse, PlainTextResponse
from starlette.exceptions import HTTPException as StarletteHTTPException

from . import reports as reports_mod
from . import search as search_mod
from .access import SUPPORTED_LANGUAGES, AccessControl, Session
from .errors import (
    InventoryError,
    NotAuthenticated,
    NotFound,
    NotImplementedFeature,
    UnknownKind,
    UnsupportedLanguage,
    ValidationFailed,
)
from .ingest import ImportSpec, import_text
from .seed import seed_all
from .storage import Page, Store
from .workflow import RequestWorkflow

SESSION_COOKIE = "session_id"
LANGUAGE_COOKIE = "lang"

ENTITY_ROUTES = {
    # plural -> (kind, writable through the API)
    "assets": ("asset", True),
    "licenses": ("license", True),
    "locations": ("location", True),
    "persons": ("person", False),   # read-only in this release
    "faculties": ("faculty", None),  # create + view only
}

# permission charged for each assignable relation
RELATION_GRANTS = {
    "person_asset": ("assign", "asset"),
    "asset_group": ("assign", "asset"),
    "asset_location": ("assign", "asset"),
    "license_asset": ("assign", "license"),
    "person_location": ("assign", "location"),
    "location_location": ("assign", "location"),
    "location_department": ("assign", "location"),
    "person_depart": ("update", "person"),
    "person_role": ("assign", "role"),
}


def _as_int(value, field: str) -> int:
    try:
        return int(value)
    except (TypeError, ValueError):
        raise ValidationFailed(field_errors={field: "must be an integer"},
                               submitted={field: value})


def _envelope(exc: InventoryError) -> JSONResponse:
    body = {"code": exc.code, "message": exc.message}
    field_errors = getattr(exc, "field_errors", None)
    if field_errors:
        body["field_errors"] = field_errors
    submitted = getattr(exc, "submitted", None)
    if submitted is not None:
        body["submitted"] = submitted
    return JSONResponse(status_code=exc.http_status, content=body)


def create_app(store: Store | None = None, *, db_path: str | None = None,
               session_ttl: timedelta | None = None,
               seed: bool | None = None) -> FastAPI:
    """Build the service; configuration falls back to INVENTORY_* env vars."""
    if store is None:
        store = Store(db_path or os.environ.get("INVENTORY_DB", "inventory.db"))
    if session_ttl is None:
        minutes = int(os.environ.get("INVENTORY_SESSION_TTL", "30"))
        session_ttl = timedelta(minutes=minutes)
    if seed is None:
        seed = os.environ.get("INVENTORY_SEED", "") in ("1", "true", "yes")
    if seed and not store.raw_select("SELECT 1 FROM roles LIMIT 1"):
        seed_all(store)

    app = FastAPI(title="campus-inventory", docs_url=None, redoc_url=None)
    access = AccessControl(store, session_ttl=session_ttl)
    workflow = RequestWorkflow(store, access)
    app.state.store = store
    app.state.access = access
    app.state.workflow = workflow

    static_dir = os.environ.get("INVENTORY_STATIC", "")
    if static_dir and os.path.isdir(static_dir):
        from fastapi.staticfiles import StaticFiles

        app.mount("/ui", StaticFiles(directory=static_dir, html=True), name="ui")

    # -- plumbing ---------------------------------------------------------

    def current_session(request: Request) -> Session | None:
        token = request.cookies.get(SESSION_COOKIE)
        if not token:
            header = request.headers.get("authorization", "")
            if header.lower().startswith("bearer "):
                token = header[7:].strip()
        return access.session_for(token)

    def need_session(request: Request) -> Session:
        session = current_session(request)
        if session is None:
            raise NotAuthenticated("log in first")
        return session

    def page_from(request: Request) -> Page:
        params = request.query_params
        try:
            size = int(params.get("page_size", "15"))
            index = int(params.get("page", "1"))
        except ValueError:
            size, index = -1, -1
        return Page(page_size=size, page_index=index,
                    sort_column=params.get("sort"),
                    sort_dir=params.get("dir", "asc"),
                    filter_type=params.get("filter_type"))

    @app.exception_handler(InventoryError)
    async def on_inventory_error(request, exc):
        return _envelope(exc)

    @app.exception_handler(RequestValidationError)
    async def on_request_validation(request, exc):
        errors = {}
        for err in exc.errors():
            where = ".".join(str(p) for p in err.get("loc", ()))
            errors.setdefault(where, err.get("msg", "invalid"))
        return JSONResponse(status_code=422, content={
            "code": "validation_failed",
            "message": "request body or parameters are invalid",
            "field_errors": errors,
        })

    @app.exception_handler(StarletteHTTPException)
    async def on_http_error(request, exc):
        codes = {404: "not_found", 405: "method_not_allowed"}
        return JSONResponse(status_code=exc.status_code, content={
            "code": codes.get(exc.status_code, "http_error"),
            "message": str(exc.detail),
        })

    @app.exception_handler(Exception)
    async def on_unexpected(request, exc):
        # never leak stack traces or internals
        return JSONResponse(status_code=500, content={
            "code": "internal_error", "message": "internal error"})

    def echo_submitted(payload: dict):
        """Attach the submitted form to whatever error escapes the block."""
        class _Echo:
            def __enter__(self):
                return self

            def __exit__(self, exc_type, exc, tb):
                if isinstance(exc, InventoryError) and getattr(exc, "submitted", None) is None:
                    exc.submitted = payload
                return False
        return _Echo()

    # -- root and session ---------------------------------------------------

    @app.get("/")
    def root():
        return {"service": "campus-inventory", "routes": route_table(app)}

    @app.post("/login")
    def login(payload: dict = Body(...)):
        outcome = access.authenticate(
            str(payload.get("username", "")), str(payload.get("password", "")))
        if isinstance(outcome, Session):
            body = _session_payload(outcome)
            response = JSONResponse(body)
            response.set_cookie(SESSION_COOKIE, outcome.token, httponly=True,
                                samesite="lax")
            return response
        return {"challenge": {"challenge_id": outcome.challenge_id,
                              "status": outcome.status}}

    @app.post("/login/biometric")
    def login_biometric(payload: dict = Body(...)):
        session = access.complete_biometric(
            str(payload.get("challenge_id", "")), payload.get("sample"))
        response = JSONResponse(_session_payload(session))
        response.set_cookie(SESSION_COOKIE, session.token, httponly=True,
                            samesite="lax")
        return response

    @app.post("/logout")
    def logout(request: Request):
        token = request.cookies.get(SESSION_COOKIE)
        if token:
            access.logout(token)
        response = JSONResponse({"ok": True, "message": "Bye."})
        response.delete_cookie(SESSION_COOKIE)
        return response

    def _session_payload(session: Session) -> dict:
        return {"session": {
            "token": session.token,
            "person_id": session.person_id,
            "username": session.username,
            "language": session.language,
            "level": session.permissions.level,
            "grants": sorted(list(g) for g in session.permissions.grants),
        }}

    @app.get("/session/language")
    def get_language(request: Request):
        session = current_session(request)
        if session:
            return {"language": session.language}
        return {"language": request.cookies.get(LANGUAGE_COOKIE, "en")}

    @app.post("/session/language")
    def set_language(request: Request, payload: dict = Body(...)):
        code = str(payload.get("code", ""))
        session = current_session(request)
        if session:
            access.set_language(session, code)
        elif code not in SUPPORTED_LANGUAGES:
            # anonymous selection only scopes the login page cookie
            raise UnsupportedLanguage(f"unsupported language: {code}")
        response = JSONResponse({"language": code})
        response.set_cookie(LANGUAGE_COOKIE, code, samesite="lax")
        return response

    # -- entities -------------------------------------------------------------

    def register_entity(plural: str, kind: str, writable):
        @app.get(f"/{plural}", name=f"list_{plural}")
        def list_records(request: Request):
            session = need_session(request)
            access.require(session, "read", kind)
            page = page_from(request)
            rows, total = store.list_records(kind, page)
            return {"rows": rows, "total": total,
                    "page": page.page_index, "page_size": page.page_size}

        @app.get(f"/{plural}/{{record_id}}", name=f"get_{plural}")
        def get_record(request: Request, record_id: int):
            session = need_session(request)
            access.require(session, "read", kind)
            record = store.get_record(kind, record_id)
            if record is None:
                raise NotFound(f"no active {kind} {record_id}")
            return record

        if writable is False:
            @app.post(f"/{plural}", name=f"create_{plural}")
            @app.put(f"/{plural}/{{record_id}}", name=f"update_{plural}")
            @app.delete(f"/{plural}/{{record_id}}", name=f"delete_{plural}")
            def read_only(request: Request, record_id: int = 0,
                          payload: dict = Body(default={})):
                raise NotImplementedFeature(f"{plural} are read-only here")
            return

        @app.post(f"/{plural}", name=f"create_{plural}", status_code=201)
        def create_record(request: Request, payload: dict = Body(...)):
            session = need_session(request)
            access.require(session, "create", kind)
            with echo_submitted(payload):
                record_id = store.create_record(kind, payload, session.username)
            return store.get_record(kind, record_id)

        if writable is None:
            @app.put(f"/{plural}/{{record_id}}", name=f"update_{plural}")
            @app.delete(f"/{plural}/{{record_id}}", name=f"delete_{plural}")
            def create_and_view_only(request: Request, record_id: int,
                                     payload: dict = Body(default={})):
                raise NotImplementedFeature(f"{plural} support create and view only")
            return

        @app.put(f"/{plural}/{{record_id}}", name=f"update_{plural}")
        def update_record(request: Request, record_id: int,
                          payload: dict = Body(...)):
            session = need_session(request)
            access.require(session, "update", kind)
            with echo_submitted(payload):
                return store.update_record(kind, record_id, payload,
                                           session.username)

        @app.delete(f"/{plural}/{{record_id}}", name=f"delete_{plural}")
        def delete_record(request: Request, record_id: int):
            session = need_session(request)
            access.require(session, "delete", kind)
            store.soft_delete(kind, record_id, session.username)
            return {"ok": True}

    for plural, (kind, writable) in ENTITY_ROUTES.items():
        register_entity(plural, kind, writable)

    @app.get("/assets/{record_id}/history")
    def asset_history(request: Request, record_id: int):
        session = need_session(request)
        access.require(session, "audit", "all")
        return {"records": store.history_of(record_id)}

    @app.post("/assets/groups", status_code=201)
    def create_group(request: Request, payload: dict = Body(...)):
        session = need_session(request)
        access.require(session, "create", "asset")
        with echo_submitted(payload):
            count = store.create_group(
                _as_int(payload.get("master_id"), "master_id"),
                [_as_int(c, "children") for c in payload.get("children", [])],
                payload.get("group_type", "Group"),
                actor=session.username)
        return {"links": count}

    # -- import and assignment ---------------------------------------------

    @app.post("/import/{kind}")
    def import_csv(request: Request, kind: str, payload: dict = Body(...)):
        session = need_session(request)
        spec = ImportSpec(
            kind=kind,
            column_count=_as_int(payload.get("column_count", 0), "column_count"),
            column_mapping=tuple(payload.get("column_mapping", [])),
            default_location=payload.get("default_location"))
        with echo_submitted(payload):
            report = import_text(store, access, session,
                                 str(payload.get("text", "")), spec)
        return {"created": report.created,
                "failed": [{"row": row, "reason": reason}
                           for row, reason in report.failed],
                "total_rows": report.total_rows}

    @app.post("/assign/{relation}")
    def assign(request: Request, relation: str, payload: dict = Body(...)):
        session = need_session(request)
        grant = RELATION_GRANTS.get(relation)
        if grant is None:
            raise UnknownKind(f"unknown relation: {relation}")
        access.require(session, *grant)
        with echo_submitted(payload):
            if relation == "person_role":
                access.assign_role(session,
                                   _as_int(payload.get("from_id"), "from_id"),
                                   str(payload.get("to_id", "")))
            else:
                store.link(relation, payload.get("from_id"),
                           payload.get("to_id"), payload.get("attrs") or {},
                           actor=session.username)
        return {"ok": True}

    # -- requests ---------------------------------------------------------------

    @app.post("/requests", status_code=201)
    def create_request(request: Request, payload: dict = Body(...)):
        session = need_session(request)
        raw_items = payload.get("items", [])
        if not all(isinstance(i, (list, tuple)) and len(i) == 2 for i in raw_items):
            raise ValidationFailed(
                field_errors={"items": "each item is [asset_id, item_type]"},
                submitted=payload)
        with echo_submitted(payload):
            request_id = workflow.create_request(
                session,
                payload.get("request_type", "Movement"),
                [(item[0], item[1]) for item in raw_items],
                location_to=payload.get("location_to"),
                description=payload.get("description", ""),
                period=payload.get("period"))
        record = store.get_record("request", request_id)
        record["items"] = store.items_of(request_id)
        return record

    @app.get("/requests")
    def list_requests(request: Request):
        session = need_session(request)
        scope = request.query_params.get("scope", "mine")
        rows, total = workflow.list_requests(session, scope, page_from(request))
        return {"rows": rows, "total": total}

    @app.post("/requests/{request_id}/approve")
    def approve(request: Request, request_id: int):
        return workflow.approve(need_session(request), request_id)

    @app.post("/requests/{request_id}/reject")
    def reject(request: Request, request_id: int, payload: dict = Body(default={})):
        return workflow.reject(need_session(request), request_id,
                               str(payload.get("reason", "")))

    @app.post("/requests/{request_id}/complete")
    def complete(request: Request, request_id: int):
        return workflow.complete(need_session(request), request_id)

    # -- search ------------------------------------------------------------------

    def _search_payload(driver) -> dict:
        return {
            "results": [{
                "object_name": r.object_name,
                "columns": list(r.columns),
                "rows": [list(row) for row in r.rows],
                "count": r.count,
            } for r in driver.results],
            "combined": [list(row) for row in driver.combined_table()],
            "total": sum(r.count for r in driver.results),
        }

    @app.get("/search/basic")
    def search_basic(request: Request):
        need_session(request)
        driver = search_mod.basic_search(store, request.query_params.get("q", ""))
        return _search_payload(driver)

    @app.post("/search/advanced")
    def search_advanced(request: Request, payload: dict = Body(...)):
        need_session(request)
        driver = search_mod.SearchDriver(store)
        rejected = []
        for unit in payload.get("units", []):
            table = unit.get("table", "")
            columns = unit.get("columns", [])
            if not driver.add_search_unit(table, columns):
                rejected.append(table)
        driver.search(str(payload.get("q", "")))
        if payload.get("format") == "csv":
            return PlainTextResponse(driver.results_as_csv(), media_type="text/csv")
        body = _search_payload(driver)
        body["rejected_units"] = rejected
        return body

    # -- reports and audit ---------------------------------------------------------

    @app.get("/reports/{kind}")
    def report(request: Request, kind: str):
        session = need_session(request)
        table = reports_mod.build_report(store, access, session, kind)
        if request.query_params.get("format") == "html":
            return HTMLResponse(reports_mod.render_report_html(table))
        return {"kind": table.kind, "columns": list(table.columns),
                "rows": [list(r) for r in table.rows]}

    @app.get("/audit")
    def audit(request: Request):
        session = need_session(request)
        params = request.query_params
        asset_id = params.get("asset_id")
        rows, total = reports_mod.audit_log(
            store, access, session,
            asset_id=_as_int(asset_id, "asset_id") if asset_id else None,
            username=params.get("username"),
            since=params.get("since"), until=params.get("until"),
            page=page_from(request))
        return {"rows": rows, "total": total}

    # -- profile and roles ------------------------------------------------------

    @app.get("/profile")
    def profile(request: Request):
        session = need_session(request)
        access.require(session, "read", "profile")
        person = store.get_record("person", session.person_id)
        return {"person": person,
                "roles": access.roles_of(session.person_id),
                "level": session.permissions.level,
                "grants": sorted(list(g) for g in session.permissions.grants),
                "language": session.language}

    @app.get("/profile/assets")
    def profile_assets(request: Request):
        session = need_session(request)
        access.require(session, "read", "profile")
        out = []
        for link in store.links("person_asset", from_id=session.person_id):
            asset = store.get_record("asset", link["Asset_ID"])
            out.append({"asset": asset, "link_type": link["Type"],
                        "since": link["Check_in_Date"],
                        "due_date": link["Due_date"]})
        return {"rows": out}

    @app.get("/profile/locations")
    def profile_locations(request: Request):
        session = need_session(request)
        access.require(session, "read", "profile")
        out = []
        for link in store.links("person_location", from_id=session.person_id):
            location = store.get_record("location", link["Location_ID"])
            out.append({"location": location, "link_type": link["Type"]})
        return {"rows": out}

    @app.get("/profile/licenses")
    def profile_licenses(request: Request):
        session = need_session(request)
        access.require(session, "read", "profile")
        out = []
        for asset_link in store.links("person_asset", from_id=session.person_id):
            for lic_link in store.links("license_asset",
                                        to_id=asset_link["Asset_ID"]):
                record = store.get_record("license", lic_link["License_ID"])
                if record:
                    out.append({"license": record,
                                "asset_id": asset_link["Asset_ID"]})
        return {"rows": out}

    @app.get("/roles")
    def list_roles(request: Request):
        session = need_session(request)
        access.require(session, "read", "role")
        return {"rows": access.list_roles()}

    @app.post("/roles")
    def add_role(request: Request, payload: dict = Body(default={})):
        raise NotImplementedFeature("adding roles is not part of this release")

    @app.put("/roles/{role_id}")
    def edit_role(request: Request, role_id: str, payload: dict = Body(...)):
        session = need_session(request)
        grants = payload.get("grants")
        access.edit_role(session, role_id,
                         description=payload.get("description"),
                         level_name=payload.get("level_name"),
                         grants=[tuple(g) for g in grants] if grants else None)
        return {"rows": [r for r in access.list_roles() if r["role_id"] == role_id]}

    return app


def route_table(app: FastAPI) -> list[dict]:
    """The endpoint catalog, stable-sorted for inspection and tests."""
    table = []
    for route in app.routes:
        methods = getattr(route, "methods", None)
        if not methods:
            continue
        for method in sorted(methods - {"HEAD", "OPTIONS"}):
            table.append({"method": method, "path": route.path})
    return sorted(table, key=lambda r: (r["path"], r["method"]))
