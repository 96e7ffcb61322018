"""Canned location reports, the audit view and HTML rendering.

Reports join locations of the requested type with their active assets and
the person marked responsible for the location.  Rendering produces one
well-formed, fully escaped table element; a small local validator backs
the markup tests.
"""

from __future__ import annotations

import html
from dataclasses import dataclass, field
from html.parser import HTMLParser

from .access import AccessControl, Session
from .errors import UnknownReportKind
from .storage import Page, Store

REPORT_KINDS = {
    "teaching_lab": ("teaching_lab",),
    "research_lab": ("research_lab",),
    # both flavours of office count as one report
    "offices": ("admin_office", "teacher_office"),
}

REPORT_COLUMNS = ("location_num", "location_description", "barcode",
                  "asset_type", "asset_status", "responsible")


@dataclass
class ReportTable:
    kind: str
    columns: tuple[str, ...]
    rows: list[tuple[str, ...]] = field(default_factory=list)


def build_report(store: Store, access: AccessControl, session: Session | None,
                 kind: str) -> ReportTable:
    """One row per (location of the kind, active asset in it)."""
    access.require(session, "report", "all")
    types = REPORT_KINDS.get(kind)
    if types is None:
        raise UnknownReportKind(f"no report called {kind!r}")
    placeholders = ", ".join("?" for _ in types)
    rows = store.raw_select(
        f"""
        SELECT l.LocationNum, l.Description, a.BarcodeNum, a.Type, a.Status,
               (SELECT p.UserName FROM person_location pl
                JOIN person p ON p.Person_ID = pl.Person_ID
                WHERE pl.Location_ID = l.Location_ID
                  AND pl.Type = 'responsible' AND p.Status != 'deleted'
                ORDER BY p.Person_ID LIMIT 1)
        FROM locations l
        JOIN assets a ON a.Location_ID = l.Location_ID
        WHERE l.Type IN ({placeholders})
        ORDER BY l.LocationNum, a.Asset_ID
        """,
        types)
    table = ReportTable(kind, REPORT_COLUMNS)
    for row in rows:
        table.rows.append(tuple("" if v is None else str(v) for v in row))
    return table


def audit_log(store: Store, access: AccessControl, session: Session | None,
              asset_id: int | None = None, username: str | None = None,
              since: str | None = None, until: str | None = None,
              page: Page | None = None) -> tuple[list[dict], int]:
    """History records newest first, archived assets included."""
    access.require(session, "audit", "all")
    where, params = [], []
    if asset_id is not None:
        where.append("Asset_ID = ?")
        params.append(asset_id)
    if username is not None:
        where.append("Modified_by = ?")
        params.append(username)
    if since is not None:
        where.append("Recorded_at >= ?")
        params.append(since)
    if until is not None:
        where.append("Recorded_at <= ?")
        params.append(until)
    clause = f" WHERE {' AND '.join(where)}" if where else ""
    page = page or Page(page_size=50)

    total = store.raw_select(
        f"SELECT COUNT(*) FROM assets_history{clause}", params)[0][0]
    rows = store.raw_select(
        f"SELECT Asset_ID, BarcodeNum, SerialNum, Location_ID, Type, Description, "
        f"Status, Color, Material, Brand, Host, Modified_by, PurchaseNo, RequestNo, "
        f"Created_date, Recorded_at FROM assets_history{clause} "
        f"ORDER BY Recorded_at DESC, rowid DESC LIMIT ? OFFSET ?",
        [*params, page.page_size, (page.page_index - 1) * page.page_size])
    names = ("asset_id", "barcode", "serial", "location_id", "asset_type",
             "description", "status", "color", "material", "brand", "host",
             "modified_by", "purchase_no", "request_no", "created_date",
             "recorded_at")
    return [dict(zip(names, row)) for row in rows], total


def render_report_html(table: ReportTable) -> str:
    """Single table element, header row first, every cell escaped."""
    parts = ["<table>", "<thead><tr>"]
    for column in table.columns:
        parts.append(f"<th>{html.escape(column)}</th>")
    parts.append("</tr></thead>")
    parts.append("<tbody>")
    for row in table.rows:
        parts.append("<tr>")
        for cell in row:
            parts.append(f"<td>{html.escape(cell)}</td>")
        parts.append("</tr>")
    parts.append("</tbody>")
    parts.append("</table>")
    return "".join(parts)


VOID_ELEMENTS = {"br", "hr", "img", "input", "meta", "link", "col", "wbr"}


class _FragmentChecker(HTMLParser):
    """Collects structural problems in an HTML fragment."""

    def __init__(self):
        super().__init__(convert_charrefs=False)
        self.stack: list[str] = []
        self.problems: list[str] = []

    def handle_starttag(self, tag, attrs):
        if tag not in VOID_ELEMENTS:
            self.stack.append(tag)

    def handle_endtag(self, tag):
        if not self.stack:
            self.problems.append(f"unexpected closing </{tag}>")
        elif self.stack[-1] != tag:
            self.problems.append(
                f"misnested </{tag}>, expected </{self.stack[-1]}>")
            self.stack.pop()
        else:
            self.stack.pop()

    def handle_data(self, data):
        if "<" in data:
            self.problems.append("unescaped '<' in text content")


def validate_markup(text: str) -> list[str]:
    """Local well-formedness check; empty list means the fragment passes."""
    checker = _FragmentChecker()
    problems: list[str] = []
    for token in ("&",):
        # bare ampersands not starting an entity
        pos = 0
        while True:
            pos = text.find(token, pos)
            if pos == -1:
                break
            tail = text[pos + 1:pos + 10]
            if not (tail.partition(";")[1] == ";" and
                    tail.partition(";")[0].replace("#", "").isalnum()):
                problems.append("bare '&' in markup")
            pos += 1
    checker.feed(text)
    checker.close()
    problems.extend(checker.problems)
    if checker.stack:
        problems.append(f"unclosed <{checker.stack[-1]}>")
    return problems
