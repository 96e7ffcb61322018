import { describe, expect, it } from "vitest";

import { InventoryApi } from "../src/api.js";
import { bundle } from "../src/i18n.js";
import { AdvancedSearch, BasicSearch } from "../src/search.js";
import { mockApi, okJson } from "./helpers.js";

const strings = bundle("en");
const emptyResult = { results: [], combined: [], total: 0 };

const CATALOG = {
  person: ["FirstName", "LastName"],
  licenses: ["Name", "Licence_company"],
};

describe("basic search page", () => {
  it("blank query shows an inline message and sends nothing", async () => {
    const { fetch, log } = mockApi(() => okJson(emptyResult));
    const page = new BasicSearch(new InventoryApi(fetch), strings);
    page.query = "   ";
    expect(await page.run()).toBe(false);
    expect(page.error).toBe(strings.search_empty_query);
    expect(log).toEqual([]);
  });

  it("query text round-trips verbatim to the API", async () => {
    const { fetch, log } = mockApi(() => okJson(emptyResult));
    const page = new BasicSearch(new InventoryApi(fetch), strings);
    page.query = "green NOT black";
    expect(await page.run()).toBe(true);
    expect(log[0].url).toBe("/search/basic?q=green%20NOT%20black");
    expect(decodeURIComponent(log[0].url.split("q=")[1])).toBe("green NOT black");
  });
});

describe("advanced search page", () => {
  it("no table ticked: inline validation, no request", async () => {
    const { fetch, log } = mockApi(() => okJson(emptyResult));
    const page = new AdvancedSearch(new InventoryApi(fetch), strings, CATALOG);
    page.query = "Microsoft";
    expect(await page.run()).toBe(false);
    expect(page.error).toBe(strings.search_no_tables);
    expect(log).toEqual([]);
  });

  it("checked tables search their selected columns, or all by default", async () => {
    const { fetch, log } = mockApi(() => okJson(emptyResult));
    const page = new AdvancedSearch(new InventoryApi(fetch), strings, CATALOG);
    page.query = "a";
    page.toggleTable("licenses");
    page.toggleColumn("licenses", "Licence_company");
    page.toggleTable("person");

    expect(await page.run()).toBe(true);
    expect(log[0].body).toEqual({
      units: [
        { table: "person", columns: ["FirstName", "LastName"] },
        { table: "licenses", columns: ["Licence_company"] },
      ],
      q: "a",
    });
  });

  it("unticking a column back restores the full set", () => {
    const { fetch } = mockApi(() => okJson(emptyResult));
    const page = new AdvancedSearch(new InventoryApi(fetch), strings, CATALOG);
    page.toggleTable("person");
    page.toggleColumn("person", "FirstName");
    page.toggleColumn("person", "FirstName");
    expect(page.units()).toEqual([
      { table: "person", columns: ["FirstName", "LastName"] }]);
  });
});
