import pytest

from campus_inventory.errors import PermissionDenied, UnknownReportKind
from campus_inventory.reports import (
    ReportTable,
    audit_log,
    build_report,
    render_report_html,
    validate_markup,
)
from campus_inventory.storage import Page

from conftest import make_asset, make_location, make_person


@pytest.fixture
def lab_world(world):
    lab = make_location(world.store, location_type="teaching_lab",
                        location_num="H-801")
    world.assets = [make_asset(world.store, lab, barcode=f"lab-{i}")
                    for i in range(2)]
    keeper = make_person(world.store, "keeper")
    world.store.link("person_location", keeper, lab, {"type": "responsible"})
    world.lab = lab
    return world


class TestBuildReport:
    def test_one_row_per_asset_in_matching_locations(self, lab_world):
        table = build_report(lab_world.store, lab_world.access,
                             lab_world.admin, "teaching_lab")
        assert len(table.rows) == 2  # join-count: 1 lab x 2 assets
        for row in table.rows:
            assert row[0] == "H-801"
            assert row[5] == "keeper"

    def test_offices_covers_both_office_types(self, world):
        a = make_location(world.store, location_type="admin_office", location_num="A1")
        t = make_location(world.store, location_type="teacher_office", location_num="T1")
        make_asset(world.store, a)
        make_asset(world.store, t)
        table = build_report(world.store, world.access, world.admin, "offices")
        assert {row[0] for row in table.rows} == {"A1", "T1"}

    def test_empty_report_when_no_matching_locations(self, world):
        table = build_report(world.store, world.access, world.admin, "offices")
        assert table.rows == []
        assert table.columns  # header survives

    def test_archived_assets_drop_out(self, lab_world):
        lab_world.store.soft_delete("asset", lab_world.assets[0], "test")
        table = build_report(lab_world.store, lab_world.access,
                             lab_world.admin, "teaching_lab")
        assert len(table.rows) == 1

    def test_student_denied(self, lab_world):
        with pytest.raises(PermissionDenied):
            build_report(lab_world.store, lab_world.access,
                         lab_world.student, "teaching_lab")

    def test_unknown_kind(self, world):
        with pytest.raises(UnknownReportKind):
            build_report(world.store, world.access, world.admin, "basements")

    def test_determinism(self, lab_world):
        first = build_report(lab_world.store, lab_world.access,
                             lab_world.admin, "teaching_lab")
        second = build_report(lab_world.store, lab_world.access,
                              lab_world.admin, "teaching_lab")
        assert render_report_html(first) == render_report_html(second)


class TestAuditLog:
    def test_filter_by_modifier(self, world):
        loc = make_location(world.store)
        asset = make_asset(world.store, loc)
        world.store.update_record("asset", asset, {"status": "broken"}, "olena")
        rows, total = audit_log(world.store, world.access, world.admin,
                                username="olena")
        assert total == 1
        assert rows[0]["modified_by"] == "olena"

    def test_archived_assets_keep_their_history(self, world):
        loc = make_location(world.store)
        asset = make_asset(world.store, loc)
        world.store.soft_delete("asset", asset, "test")
        rows, total = audit_log(world.store, world.access, world.admin,
                                asset_id=asset)
        assert total == 2

    def test_newest_first(self, world):
        loc = make_location(world.store)
        asset = make_asset(world.store, loc)
        world.store.update_record("asset", asset, {"status": "broken"}, "later")
        rows, _ = audit_log(world.store, world.access, world.admin)
        assert rows[0]["modified_by"] == "later"

    def test_empty_store(self, world):
        rows, total = audit_log(world.store, world.access, world.admin)
        assert rows == [] and total == 0

    def test_denied_without_grant(self, world):
        with pytest.raises(PermissionDenied):
            audit_log(world.store, world.access, world.clerk)

    def test_every_mutation_appears_exactly_once(self, world):
        loc = make_location(world.store)
        mutations = 0
        for i in range(3):
            asset = make_asset(world.store, loc)
            mutations += 1
            for status in ("broken", "available"):
                world.store.update_record("asset", asset, {"status": status}, "t")
                mutations += 1
        world.store.soft_delete("asset", asset, "t")
        mutations += 1
        _, total = audit_log(world.store, world.access, world.admin,
                             page=Page(page_size=200))
        assert total == mutations


class TestHtmlRendering:
    def test_row_counts(self):
        table = ReportTable("offices", ("a", "b"),
                            [("1", "2"), ("3", "4")])
        markup = render_report_html(table)
        assert markup.count("<tr>") == 3  # header + 2 data rows
        assert markup.startswith("<table>")
        assert markup.endswith("</table>")

    def test_script_content_is_escaped(self):
        table = ReportTable("offices", ("a",), [("<script>alert(1)</script>",)])
        markup = render_report_html(table)
        assert "<script>" not in markup
        assert "&lt;script&gt;" in markup

    def test_empty_report_is_header_only(self):
        markup = render_report_html(ReportTable("offices", ("a", "b")))
        assert markup.count("<tr>") == 1

    def test_rendered_markup_validates(self, lab_world):
        table = build_report(lab_world.store, lab_world.access,
                             lab_world.admin, "teaching_lab")
        assert validate_markup(render_report_html(table)) == []

    def test_hostile_cells_still_validate(self):
        table = ReportTable("offices", ("a",),
                            [("<td>",), ("&amp;&",), ("</table>",)])
        assert validate_markup(render_report_html(table)) == []


class TestMarkupValidator:
    def test_catches_misnesting(self):
        assert validate_markup("<table><tr></table></tr>")

    def test_catches_unclosed(self):
        assert validate_markup("<table><tr>")

    def test_catches_raw_angle(self):
        assert validate_markup("<p>a < b</p>")

    def test_accepts_clean_fragment(self):
        assert validate_markup("<p>a &lt; b &amp; c</p>") == []
