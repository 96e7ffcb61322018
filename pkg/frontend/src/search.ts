// Basic and advanced search pages. Query text travels verbatim; the
// engine owns the AND/OR/NOT semantics. Client-side validation only
// stops requests that could never mean anything (blank query, no table
// ticked).

import { InventoryApi, SearchResult } from "./api.js";
import { escapeHtml } from "./html.js";
import { StringKey } from "./i18n.js";

export class BasicSearch {
  query = "";
  error: string | null = null;
  result: SearchResult | null = null;

  constructor(private api: InventoryApi,
              private strings: Record<StringKey, string>) {}

  async run(): Promise<boolean> {
    if (this.query.trim() === "") {
      this.error = this.strings.search_empty_query;
      return false; // no request leaves the page
    }
    this.error = null;
    this.result = await this.api.searchBasic(this.query);
    return true;
  }
}

export interface SearchableTable {
  name: string;
  columns: string[];
  checked: boolean;
  selectedColumns: Set<string>;
}

export class AdvancedSearch {
  query = "";
  error: string | null = null;
  result: SearchResult | null = null;
  tables: SearchableTable[];

  constructor(private api: InventoryApi,
              private strings: Record<StringKey, string>,
              catalog: Record<string, string[]>) {
    this.tables = Object.entries(catalog).map(([name, columns]) => ({
      name, columns, checked: false, selectedColumns: new Set<string>(),
    }));
  }

  toggleTable(name: string): void {
    const table = this.tables.find((t) => t.name === name);
    if (table) table.checked = !table.checked;
  }

  toggleColumn(name: string, column: string): void {
    const table = this.tables.find((t) => t.name === name);
    if (!table) return;
    if (table.selectedColumns.has(column)) {
      table.selectedColumns.delete(column);
    } else {
      table.selectedColumns.add(column);
    }
  }

  units(): { table: string; columns: string[] }[] {
    return this.tables
      .filter((t) => t.checked)
      .map((t) => ({
        table: t.name,
        columns: t.selectedColumns.size > 0 ? [...t.selectedColumns] : t.columns,
      }));
  }

  async run(): Promise<boolean> {
    if (this.query.trim() === "") {
      this.error = this.strings.search_empty_query;
      return false;
    }
    const units = this.units();
    if (units.length === 0) {
      this.error = this.strings.search_no_tables;
      return false; // inline validation, no request sent
    }
    this.error = null;
    this.result = await this.api.searchAdvanced(units, this.query);
    return true;
  }
}

/** Combined result table, every row tagged with its source table. */
export function renderSearchResults(result: SearchResult,
                                    strings: Record<StringKey, string>): string {
  const parts: string[] = [];
  parts.push(`<table><thead><tr><th>${escapeHtml(strings.search_source)}</th>` +
             `<th>${escapeHtml(strings.search_results_for)}</th></tr></thead><tbody>`);
  for (const row of result.combined) {
    const [source, ...cells] = row;
    parts.push(`<tr><td>${escapeHtml(source)}</td><td>` +
               cells.map((cell) => escapeHtml(cell)).join(" | ") + `</td></tr>`);
  }
  parts.push(`</tbody></table>`);
  return parts.join("");
}
