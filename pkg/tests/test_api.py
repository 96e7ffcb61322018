import pytest
from fastapi.testclient import TestClient

from campus_inventory.api import create_app, route_table
from campus_inventory.seed import seed_all, seed_person
from campus_inventory.storage import Store


@pytest.fixture
def service():
    store = Store(":memory:")
    seed_all(store)
    seed_person(store, "clerk", "clerk-pw", "inventory_clerk")
    seed_person(store, "student", "student-pw", "student")
    app = create_app(store)
    with TestClient(app, raise_server_exceptions=False) as client:
        client.app = app
        client.store = store
        yield client
    store.close()


def login(client, username, password):
    response = client.post("/login", json={"username": username, "password": password})
    assert response.status_code == 200, response.text
    # identity rides the bearer header in tests; drop the cookie so the
    # client's jar doesn't pin every later call to this login
    client.cookies.clear()
    return {"Authorization": f"Bearer {response.json()['session']['token']}"}


@pytest.fixture
def admin(service):
    return login(service, "test", "test")


@pytest.fixture
def clerk(service):
    return login(service, "clerk", "clerk-pw")


@pytest.fixture
def student(service):
    return login(service, "student", "student-pw")


class TestSessionFlow:
    def test_login_sets_cookie_and_lists_grants(self, service):
        response = service.post("/login", json={"username": "test", "password": "test"})
        body = response.json()["session"]
        assert body["username"] == "test"
        assert body["level"] == "Level3"
        assert ["create", "asset"] in body["grants"]
        assert "session_id" in response.cookies
        # the cookie authenticates by itself
        assert service.get("/profile").status_code == 200

    def test_wrong_password(self, service):
        response = service.post("/login", json={"username": "test", "password": "x"})
        assert response.status_code == 401
        assert response.json()["code"] == "auth_failed"

    def test_missing_session_is_401_permission_denied(self, service):
        response = service.post("/requests", json={"request_type": "Movement"})
        assert response.status_code == 401
        assert response.json()["code"] == "permission_denied"

    def test_logout_invalidates(self, service):
        service.post("/login", json={"username": "test", "password": "test"})
        assert service.get("/profile").status_code == 200
        response = service.post("/logout")
        assert response.json()["message"] == "Bye."
        assert service.get("/profile").status_code == 401

    def test_bearer_header_accepted(self, service, admin):
        assert service.get("/profile", headers=admin).status_code == 200

    def test_biometric_two_step_login(self, service):
        store = service.store
        pid = seed_person(store, "vip", "pw", "admin", check_biometric=True)
        access = service.app.state.access
        access.enroll_voice(pid, "my-voice")
        first = service.post("/login", json={"username": "vip", "password": "pw"})
        challenge = first.json()["challenge"]
        assert challenge["status"] == "pending"
        second = service.post("/login/biometric", json={
            "challenge_id": challenge["challenge_id"], "sample": "my-voice"})
        assert second.status_code == 200
        assert second.json()["session"]["username"] == "vip"

    def test_biometric_mismatch(self, service):
        store = service.store
        pid = seed_person(store, "vip2", "pw", "admin", check_biometric=True)
        service.app.state.access.enroll_voice(pid, "real")
        challenge = service.post(
            "/login", json={"username": "vip2", "password": "pw"}).json()["challenge"]
        response = service.post("/login/biometric", json={
            "challenge_id": challenge["challenge_id"], "sample": "fake"})
        assert response.status_code == 401
        assert response.json()["code"] == "biometric_mismatch"


class TestLanguage:
    def test_session_language_round_trip(self, service, admin):
        assert service.get("/session/language", headers=admin).json() == {"language": "en"}
        service.post("/session/language", json={"code": "fr"}, headers=admin)
        assert service.get("/session/language", headers=admin).json() == {"language": "fr"}

    def test_unsupported_code(self, service, admin):
        response = service.post("/session/language", json={"code": "xx"}, headers=admin)
        assert response.status_code == 422
        assert response.json()["code"] == "unsupported_language"

    def test_anonymous_language_is_cookie_scoped(self, service):
        response = service.post("/session/language", json={"code": "fr"})
        assert response.status_code == 200
        assert service.get("/session/language").json() == {"language": "fr"}


class TestEntityRoutes:
    def test_license_fixture_page(self, service, admin):
        response = service.get("/licenses?page_size=15&page=1", headers=admin)
        body = response.json()
        assert body["total"] == 5
        assert len(body["rows"]) == 5
        names = {r["name"] for r in body["rows"]}
        assert "Adobe 9.0" in names

    def test_bad_page_size(self, service, admin):
        response = service.get("/assets?page_size=20", headers=admin)
        assert response.status_code == 422
        assert response.json()["code"] == "bad_page"

    def test_create_read_update_delete_asset(self, service, clerk):
        created = service.post("/assets", headers=clerk, json={
            "asset_type": "Computer", "location_id": 1, "barcode": "api-1"})
        assert created.status_code == 201
        asset = created.json()
        asset_id = asset["asset_id"]
        assert asset["status"] == "available"

        got = service.get(f"/assets/{asset_id}", headers=clerk).json()
        assert got["barcode"] == "api-1"

        updated = service.put(f"/assets/{asset_id}", headers=clerk,
                              json={"status": "broken"})
        assert updated.json()["status"] == "broken"

        deleted = service.delete(f"/assets/{asset_id}", headers=clerk)
        assert deleted.json() == {"ok": True}
        assert service.get(f"/assets/{asset_id}", headers=clerk).status_code == 404

    def test_duplicate_barcode_is_409_with_echo(self, service, clerk):
        payload = {"asset_type": "Desk", "location_id": 1, "barcode": "twice"}
        assert service.post("/assets", headers=clerk, json=payload).status_code == 201
        before = service.store.content_hash()
        response = service.post("/assets", headers=clerk, json=payload)
        assert response.status_code == 409
        body = response.json()
        assert body["code"] == "duplicate_barcode"
        assert body["submitted"] == payload  # dropdown state survives client-side
        assert service.store.content_hash() == before

    def test_validation_error_echoes_submitted_values(self, service, clerk):
        payload = {"asset_type": "Toaster", "location_id": 1, "color": "beige"}
        response = service.post("/assets", headers=clerk, json=payload)
        assert response.status_code == 422
        body = response.json()
        assert body["code"] == "validation_failed"
        assert "asset_type" in body["field_errors"]
        assert body["submitted"]["color"] == "beige"

    def test_persons_read_only(self, service, admin):
        assert service.get("/persons", headers=admin).status_code == 200
        assert service.post("/persons", headers=admin, json={}).status_code == 501
        assert service.put("/persons/1", headers=admin, json={}).status_code == 501
        assert service.delete("/persons/1", headers=admin).status_code == 501

    def test_faculties_create_and_view_only(self, service, admin):
        created = service.post("/faculties", headers=admin,
                               json={"name": "ENCS", "kind": "Faculty"})
        assert created.status_code == 201
        listing = service.get("/faculties", headers=admin)
        assert listing.json()["total"] == 1
        assert service.put("/faculties/1", headers=admin, json={}).status_code == 501
        assert service.delete("/faculties/1", headers=admin).status_code == 501

    def test_person_rows_never_carry_digest(self, service, admin):
        rows = service.get("/persons", headers=admin).json()["rows"]
        assert rows
        assert all("password_digest" not in row for row in rows)
        assert all("password" not in row for row in rows)


class TestGroupsAndAssign:
    def make_assets(self, service, clerk, n):
        ids = []
        for i in range(n):
            response = service.post("/assets", headers=clerk, json={
                "asset_type": "Computer", "location_id": 1})
            ids.append(response.json()["asset_id"])
        return ids

    def test_group_any_nonempty_child_set(self, service, clerk):
        ids = self.make_assets(service, clerk, 3)
        response = service.post("/assets/groups", headers=clerk, json={
            "master_id": ids[0], "children": ids[1:], "group_type": "Work_station"})
        assert response.status_code == 201
        assert response.json() == {"links": 2}
        single = service.post("/assets/groups", headers=clerk, json={
            "master_id": ids[1], "children": [ids[2]]})
        assert single.status_code == 201

    def test_group_empty_children_rejected(self, service, clerk):
        ids = self.make_assets(service, clerk, 1)
        response = service.post("/assets/groups", headers=clerk, json={
            "master_id": ids[0], "children": []})
        assert response.status_code == 422
        assert response.json()["code"] == "empty_children"
        assert "At least one asset" in response.json()["message"]

    def test_assignment_visible_in_subsequent_listing(self, service, clerk):
        # regression: the table must show the new location after assigning
        target = service.post("/locations", headers=clerk, json={
            "location_type": "teaching_lab", "location_num": "H-901"}).json()
        asset_id = self.make_assets(service, clerk, 1)[0]
        assign = service.post("/assign/asset_location", headers=clerk, json={
            "from_id": asset_id, "to_id": target["location_id"]})
        assert assign.status_code == 200
        rows = service.get("/assets", headers=clerk).json()["rows"]
        mine = [r for r in rows if r["asset_id"] == asset_id]
        assert mine[0]["location_id"] == target["location_id"]

    def test_assign_unknown_relation(self, service, clerk):
        response = service.post("/assign/psychic_link", headers=clerk,
                                json={"from_id": 1, "to_id": 2})
        assert response.status_code == 422

    def test_quota_exceeded_maps_to_409(self, service, clerk, admin):
        ids = self.make_assets(service, clerk, 2)
        lic = service.post("/licenses", headers=clerk, json={
            "name": "Tight", "license_type": "Quantity", "licence_counter": 1}).json()
        ok = service.post("/assign/license_asset", headers=clerk, json={
            "from_id": lic["license_id"], "to_id": ids[0]})
        assert ok.status_code == 200
        full = service.post("/assign/license_asset", headers=clerk, json={
            "from_id": lic["license_id"], "to_id": ids[1]})
        assert full.status_code == 409
        assert full.json()["code"] == "quota_exceeded"


class TestImportRoute:
    def test_import_assets(self, service, clerk):
        response = service.post("/import/asset", headers=clerk, json={
            "text": "i-1,sn1,Computer\ni-2,sn2,Desk",
            "column_count": 3,
            "column_mapping": ["barcode", "serial", "type"],
            "default_location": 1,
        })
        body = response.json()
        assert body["total_rows"] == 2
        assert len(body["created"]) == 2

    def test_missing_location_is_select_location(self, service, clerk):
        payload = {"text": "i-9", "column_count": 1, "column_mapping": ["barcode"]}
        response = service.post("/import/asset", headers=clerk, json=payload)
        assert response.status_code == 422
        body = response.json()
        assert body["code"] == "missing_location"
        assert body["message"] == "Select location"
        assert body["submitted"]["text"] == "i-9"  # pasted text preserved

    def test_duplicate_rows_reported_not_fatal(self, service, clerk):
        spec = {"text": "dup-1,x,Computer", "column_count": 3,
                "column_mapping": ["barcode", "serial", "type"],
                "default_location": 1}
        service.post("/import/asset", headers=clerk, json=spec)
        response = service.post("/import/asset", headers=clerk, json=spec)
        body = response.json()
        assert body["created"] == []
        assert body["failed"][0]["reason"].startswith("Duplicate barcode")

    def test_student_denied_whole_batch(self, service, student):
        response = service.post("/import/asset", headers=student, json={
            "text": "x,1,Computer", "column_count": 3,
            "column_mapping": ["barcode", "serial", "type"],
            "default_location": 1})
        assert response.status_code == 403


class TestRequestRoutes:
    def make_request(self, service, student, clerk):
        asset = service.post("/assets", headers=clerk, json={
            "asset_type": "Projector", "location_id": 1}).json()["asset_id"]
        response = service.post("/requests", headers=student, json={
            "request_type": "Movement",
            "items": [[asset, "Move"]],
            "location_to": 1,
        })
        assert response.status_code == 201
        return response.json()["request_id"]

    def test_lifecycle_over_http(self, service, student, clerk):
        rid = self.make_request(service, student, clerk)
        approved = service.post(f"/requests/{rid}/approve", headers=clerk)
        assert approved.json()["status"] == "Approved"
        completed = service.post(f"/requests/{rid}/complete", headers=clerk)
        assert completed.json()["status"] == "Completed"

    def test_invalid_state_is_409(self, service, student, clerk):
        rid = self.make_request(service, student, clerk)
        service.post(f"/requests/{rid}/reject", headers=clerk,
                     json={"reason": "nope"})
        response = service.post(f"/requests/{rid}/approve", headers=clerk)
        assert response.status_code == 409
        assert response.json()["code"] == "invalid_state"

    def test_scope_mine_vs_all(self, service, student, clerk, admin):
        self.make_request(service, student, clerk)
        mine = service.get("/requests?scope=mine", headers=student).json()
        assert mine["total"] == 1
        denied = service.get("/requests?scope=all", headers=student)
        assert denied.status_code == 403
        everything = service.get("/requests?scope=all", headers=admin).json()
        assert everything["total"] == 1

    def test_self_approval_blocked_over_http(self, service, clerk):
        asset = service.post("/assets", headers=clerk, json={
            "asset_type": "Desk", "location_id": 1}).json()["asset_id"]
        rid = service.post("/requests", headers=clerk, json={
            "request_type": "Movement", "items": [[asset, "Move"]],
            "location_to": 1}).json()["request_id"]
        response = service.post(f"/requests/{rid}/approve", headers=clerk)
        assert response.status_code == 409
        assert response.json()["code"] == "self_approval"


class TestSearchRoutes:
    def test_basic_search_fixture(self, service, student):
        response = service.get("/search/basic?q=Microsoft", headers=student)
        body = response.json()
        assert body["total"] == 3
        assert all(row[0] == "licenses" for row in body["combined"])

    def test_advanced_search_units(self, service, student):
        response = service.post("/search/advanced", headers=student, json={
            "units": [{"table": "licenses", "columns": ["Type"]}],
            "q": "License NOT Microsoft"})
        body = response.json()
        assert body["total"] == 2
        assert body["rejected_units"] == []

    def test_advanced_search_rejects_unknown_units(self, service, student):
        response = service.post("/search/advanced", headers=student, json={
            "units": [{"table": "secrets", "columns": ["x"]}], "q": "a"})
        assert response.status_code == 422
        assert response.json()["code"] == "empty_pool"

    def test_csv_format(self, service, student):
        response = service.post("/search/advanced", headers=student, json={
            "units": [{"table": "licenses", "columns": ["Licence_company"]}],
            "q": "Microsoft", "format": "csv"})
        assert response.headers["content-type"].startswith("text/csv")
        assert response.text.splitlines()[0] == "licenses"

    def test_empty_query_rejected(self, service, student):
        response = service.get("/search/basic?q=", headers=student)
        assert response.status_code == 422
        assert response.json()["code"] == "empty_query"

    def test_search_requires_login(self, service):
        assert service.get("/search/basic?q=a").status_code == 401


class TestReportRoutes:
    def setup_lab(self, service, clerk):
        lab = service.post("/locations", headers=clerk, json={
            "location_type": "teaching_lab", "location_num": "H-801"}).json()
        for i in range(2):
            service.post("/assets", headers=clerk, json={
                "asset_type": "Computer", "location_id": lab["location_id"],
                "barcode": f"lab-{i}"})
        return lab

    def test_report_json_and_html(self, service, clerk, admin):
        self.setup_lab(service, clerk)
        body = service.get("/reports/teaching_lab", headers=admin).json()
        assert len(body["rows"]) == 2
        html_page = service.get("/reports/teaching_lab?format=html", headers=admin)
        assert html_page.headers["content-type"].startswith("text/html")
        assert html_page.text.count("<tr>") == 3

    def test_report_permission(self, service, clerk):
        assert service.get("/reports/offices", headers=clerk).status_code == 403

    def test_unknown_report_kind(self, service, admin):
        response = service.get("/reports/basements", headers=admin)
        assert response.status_code == 404
        assert response.json()["code"] == "unknown_report_kind"

    def test_audit_route(self, service, clerk, admin):
        self.setup_lab(service, clerk)
        body = service.get("/audit?username=clerk", headers=admin).json()
        assert body["total"] >= 2
        assert all(r["modified_by"] == "clerk" for r in body["rows"])
        assert service.get("/audit", headers=clerk).status_code == 403

    def test_asset_history_route(self, service, clerk, admin):
        asset = service.post("/assets", headers=clerk, json={
            "asset_type": "Desk", "location_id": 1}).json()["asset_id"]
        service.put(f"/assets/{asset}", headers=clerk, json={"status": "broken"})
        body = service.get(f"/assets/{asset}/history", headers=admin).json()
        assert len(body["records"]) == 2


class TestRoleRoutes:
    def test_list_and_edit(self, service, admin):
        rows = service.get("/roles", headers=admin).json()["rows"]
        assert {r["role_id"] for r in rows} == {"admin", "inventory_clerk", "student"}
        response = service.put("/roles/inventory_clerk", headers=admin,
                               json={"level_name": "Level2"})
        assert response.json()["rows"][0]["level_name"] == "Level2"

    def test_add_role_not_implemented(self, service, admin):
        assert service.post("/roles", headers=admin, json={}).status_code == 501

    def test_clerk_cannot_edit_roles(self, service, clerk):
        response = service.put("/roles/student", headers=clerk,
                               json={"description": "hax"})
        assert response.status_code == 403


class TestProfileRoutes:
    def test_profile_shows_roles_and_grants(self, service, student):
        body = service.get("/profile", headers=student).json()
        assert body["roles"] == ["student"]
        assert ["create", "request"] in body["grants"]
        assert "password_digest" not in body["person"]

    def test_profile_assets_after_assignment(self, service, clerk, admin):
        asset = service.post("/assets", headers=clerk, json={
            "asset_type": "Mouse", "location_id": 1}).json()["asset_id"]
        me = service.get("/profile", headers=clerk).json()["person"]["person_id"]
        service.post("/assign/person_asset", headers=clerk, json={
            "from_id": me, "to_id": asset})
        rows = service.get("/profile/assets", headers=clerk).json()["rows"]
        assert len(rows) == 1
        assert rows[0]["asset"]["asset_id"] == asset


class TestEnvelopeAndCatalog:
    def test_unknown_route_envelope(self, service):
        response = service.get("/no/such/page")
        assert response.status_code == 404
        assert response.json()["code"] == "not_found"

    def test_wrong_method_envelope(self, service):
        response = service.delete("/login")
        assert response.status_code == 405
        assert response.json()["code"] == "method_not_allowed"

    def test_root_lists_routes(self, service):
        body = service.get("/").json()
        paths = {(r["method"], r["path"]) for r in body["routes"]}
        for expected in (("POST", "/login"), ("POST", "/login/biometric"),
                         ("POST", "/logout"), ("GET", "/session/language"),
                         ("POST", "/session/language"), ("GET", "/assets"),
                         ("POST", "/assets/groups"), ("POST", "/import/{kind}"),
                         ("POST", "/assign/{relation}"), ("GET", "/requests"),
                         ("POST", "/requests/{request_id}/approve"),
                         ("GET", "/search/basic"), ("POST", "/search/advanced"),
                         ("GET", "/reports/{kind}"), ("GET", "/audit"),
                         ("GET", "/assets/{record_id}/history")):
            assert expected in paths, expected

    def test_replaying_gets_never_mutates(self, service, admin):
        before = service.store.content_hash()
        for path in ("/licenses", "/search/basic?q=Microsoft",
                     "/reports/offices", "/audit", "/profile", "/roles"):
            service.get(path, headers=admin)
            service.get(path, headers=admin)
        assert service.store.content_hash() == before

    def test_errors_carry_no_internals(self, service, admin):
        response = service.get("/reports/basements", headers=admin)
        text = response.text.lower()
        assert "traceback" not in text
        assert "sqlite" not in text
