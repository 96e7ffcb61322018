// Entity table behaviour: sort, filter, pagination, hide/show columns,
// row selection. Everything except the list fetch is pure view state;
// refreshes are GET-only and stale responses are dropped by sequence
// number.

import { InventoryApi, ListResult } from "./api.js";
import { escapeHtml } from "./html.js";
import { StringKey } from "./i18n.js";

export const PAGE_SIZES = [15, 50, 100, 150, 200];

export type SortDirection = "asc" | "desc";

export interface TableViewState {
  kind: string;                 // plural route segment, e.g. "assets"
  idField: string;              // e.g. "asset_id"
  columns: string[];            // display order, field names
  filterOptions: string[];      // entity type values for the filter dropdown
  sortColumn: string | null;
  sortDir: SortDirection;
  filterType: string | null;
  pageSize: number;
  pageIndex: number;
  hiddenColumns: Set<string>;
  selection: Set<number>;
  selectionNote: boolean;       // shown when a page change dropped the selection
  rows: Record<string, unknown>[];
  total: number;
}

export function initialTableState(kind: string, idField: string,
                                  columns: string[],
                                  filterOptions: string[] = []): TableViewState {
  return {
    kind, idField, columns, filterOptions,
    sortColumn: null, sortDir: "asc", filterType: null,
    pageSize: 15, pageIndex: 1,
    hiddenColumns: new Set(), selection: new Set(), selectionNote: false,
    rows: [], total: 0,
  };
}

export function listQuery(state: TableViewState): string {
  const params = new URLSearchParams();
  params.set("page_size", String(state.pageSize));
  params.set("page", String(state.pageIndex));
  if (state.sortColumn) {
    params.set("sort", state.sortColumn);
    params.set("dir", state.sortDir);
  }
  if (state.filterType) params.set("filter_type", state.filterType);
  return params.toString();
}

export class TableController {
  state: TableViewState;
  private seq = 0;

  constructor(private api: InventoryApi, state: TableViewState) {
    this.state = state;
  }

  async refresh(): Promise<void> {
    const mine = ++this.seq;
    const result: ListResult = await this.api.list(this.state.kind,
                                                   listQuery(this.state));
    if (mine !== this.seq) return; // a newer request already landed
    this.state.rows = result.rows;
    this.state.total = result.total;
  }

  /** Toggle sort on a column; selection survives re-sorting. */
  async sortBy(column: string): Promise<void> {
    if (this.state.sortColumn === column) {
      this.state.sortDir = this.state.sortDir === "asc" ? "desc" : "asc";
    } else {
      this.state.sortColumn = column;
      this.state.sortDir = "asc";
    }
    await this.refresh();
  }

  async setPageSize(size: number): Promise<void> {
    this.state.pageSize = size;
    this.state.pageIndex = 1;
    this.dropSelectionOnNavigation();
    await this.refresh();
  }

  async goToPage(index: number): Promise<void> {
    this.state.pageIndex = index;
    this.dropSelectionOnNavigation();
    await this.refresh();
  }

  async applyFilter(filterType: string | null): Promise<void> {
    this.state.filterType = filterType;
    this.state.pageIndex = 1;
    this.dropSelectionOnNavigation();
    await this.refresh();
  }

  /** Pure view-state change: no request leaves the page. */
  toggleColumn(column: string): void {
    if (this.state.hiddenColumns.has(column)) {
      this.state.hiddenColumns.delete(column);
    } else {
      this.state.hiddenColumns.add(column);
    }
  }

  toggleSelect(id: number): void {
    if (this.state.selection.has(id)) {
      this.state.selection.delete(id);
    } else {
      this.state.selection.add(id);
    }
    this.state.selectionNote = false;
  }

  private dropSelectionOnNavigation(): void {
    // selections cannot follow rows across pages; say so instead of
    // silently losing them
    if (this.state.selection.size > 0) {
      this.state.selection = new Set();
      this.state.selectionNote = true;
    }
  }
}

export function visibleColumns(state: TableViewState): string[] {
  return state.columns.filter((c) => !state.hiddenColumns.has(c));
}

export function pageCount(state: TableViewState): number {
  return Math.max(1, Math.ceil(state.total / state.pageSize));
}

export function renderTable(state: TableViewState,
                            strings: Record<StringKey, string>): string {
  const parts: string[] = [];
  const columns = visibleColumns(state);

  parts.push(`<div class="table-controls">`);
  parts.push(`<label>${escapeHtml(strings.table_filter)} `);
  parts.push(`<select data-role="filter">`);
  parts.push(`<option value=""></option>`);
  for (const option of state.filterOptions) {
    const selected = option === state.filterType ? ` selected="selected"` : "";
    parts.push(`<option value="${escapeHtml(option)}"${selected}>` +
               `${escapeHtml(option)}</option>`);
  }
  parts.push(`</select></label>`);
  parts.push(`<button data-action="apply-filter">` +
             `${escapeHtml(strings.table_apply)}</button>`);
  parts.push(`<span>${escapeHtml(strings.table_rows_per_page)} `);
  for (const size of PAGE_SIZES) {
    parts.push(`<a href="#" data-action="page-size" data-size="${size}">` +
               `${size}</a> `);
  }
  parts.push(`</span></div>`);

  if (state.selectionNote) {
    parts.push(`<p class="note">${escapeHtml(strings.table_selection_note)}</p>`);
  }

  parts.push(`<table><thead><tr><th></th>`);
  for (const column of columns) {
    parts.push(`<th>${escapeHtml(column)} ` +
               `<button data-action="sort" data-column="${escapeHtml(column)}">` +
               `${escapeHtml(strings.table_sort)}</button> ` +
               `<a href="#" data-action="hide" data-column="${escapeHtml(column)}">` +
               `${escapeHtml(strings.table_hide)}</a></th>`);
  }
  parts.push(`<th></th></tr></thead><tbody>`);
  for (const row of state.rows) {
    const id = Number(row[state.idField]);
    const checked = state.selection.has(id) ? ` checked="checked"` : "";
    parts.push(`<tr><td><input type="checkbox" data-action="select" ` +
               `data-id="${id}"${checked}/></td>`);
    for (const column of columns) {
      parts.push(`<td>${escapeHtml(row[column])}</td>`);
    }
    parts.push(`<td><a href="#" data-action="edit" data-id="${id}">` +
               `${escapeHtml(strings.table_edit)}</a></td></tr>`);
  }
  parts.push(`</tbody></table>`);

  parts.push(`<p>${escapeHtml(strings.table_pages)} `);
  for (let i = 1; i <= pageCount(state); i++) {
    parts.push(`<a href="#" data-action="page" data-page="${i}">${i}</a> `);
  }
  parts.push(`</p>`);
  return parts.join("");
}
