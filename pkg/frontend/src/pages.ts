// The page tree and its menus. Menu items carry the grant the API
// charges for the action, so anything the server would reject never
// renders; a help panel rides along on every page.

import { SessionInfo, grantKey, grantSet } from "./api.js";
import { escapeHtml } from "./html.js";
import { Language, StringKey, bundle } from "./i18n.js";

export interface MenuItem {
  key: string;                   // routing key, also the ROUTE_GRANTS id
  labelKey: StringKey;
  grant?: [string, string];      // absent = visible to any logged-in user
}

export const MAIN_MENU: MenuItem[] = [
  { key: "asset", labelKey: "menu_asset", grant: ["read", "asset"] },
  { key: "license", labelKey: "menu_license", grant: ["read", "license"] },
  { key: "location", labelKey: "menu_location", grant: ["read", "location"] },
  { key: "person", labelKey: "menu_person", grant: ["read", "person"] },
  { key: "administration", labelKey: "menu_administration", grant: ["read", "role"] },
  { key: "faculty", labelKey: "menu_faculty", grant: ["read", "faculty"] },
  { key: "requests", labelKey: "menu_requests" },
  { key: "search", labelKey: "menu_search" },
  { key: "report", labelKey: "menu_report", grant: ["report", "all"] },
];

export const SUBMENUS: Record<string, MenuItem[]> = {
  asset: [
    { key: "assets.create", labelKey: "submenu_add_new", grant: ["create", "asset"] },
    { key: "assets.list", labelKey: "submenu_view", grant: ["read", "asset"] },
    { key: "assets.delete", labelKey: "submenu_delete", grant: ["delete", "asset"] },
    { key: "requests.create", labelKey: "submenu_borrow", grant: ["create", "request"] },
    { key: "assets.group", labelKey: "submenu_create_group", grant: ["create", "asset"] },
    { key: "assets.import", labelKey: "submenu_import", grant: ["import", "asset"] },
    { key: "assets.assign_person", labelKey: "submenu_assign_person",
      grant: ["assign", "asset"] },
    { key: "assets.assign_location", labelKey: "submenu_assign_location",
      grant: ["assign", "asset"] },
    { key: "profile.assets", labelKey: "submenu_my_assets", grant: ["read", "profile"] },
    { key: "profile.borrowed", labelKey: "submenu_my_borrowed",
      grant: ["read", "profile"] },
  ],
  license: [
    { key: "licenses.create", labelKey: "submenu_add_new", grant: ["create", "license"] },
    { key: "licenses.list", labelKey: "submenu_view", grant: ["read", "license"] },
    { key: "licenses.delete", labelKey: "submenu_delete", grant: ["delete", "license"] },
    { key: "licenses.import", labelKey: "submenu_import", grant: ["import", "license"] },
    { key: "licenses.assign_asset", labelKey: "submenu_assign_asset",
      grant: ["assign", "license"] },
    { key: "profile.licenses", labelKey: "submenu_my_licenses",
      grant: ["read", "profile"] },
  ],
  location: [
    { key: "locations.create", labelKey: "submenu_add_new",
      grant: ["create", "location"] },
    { key: "locations.list", labelKey: "submenu_view", grant: ["read", "location"] },
    { key: "locations.delete", labelKey: "submenu_delete",
      grant: ["delete", "location"] },
    { key: "locations.import", labelKey: "submenu_import",
      grant: ["import", "location"] },
    { key: "locations.assign_department", labelKey: "submenu_assign_department",
      grant: ["assign", "location"] },
    { key: "profile.locations", labelKey: "submenu_my_locations",
      grant: ["read", "profile"] },
  ],
  person: [
    { key: "persons.list", labelKey: "submenu_view", grant: ["read", "person"] },
  ],
  administration: [
    { key: "roles.read", labelKey: "submenu_view_roles", grant: ["read", "role"] },
    { key: "roles.edit", labelKey: "submenu_edit_role", grant: ["edit", "role"] },
    { key: "roles.assign", labelKey: "submenu_assign_role", grant: ["assign", "role"] },
  ],
  faculty: [
    { key: "faculties.create", labelKey: "submenu_add_new",
      grant: ["create", "faculty"] },
    { key: "faculties.list", labelKey: "submenu_view", grant: ["read", "faculty"] },
  ],
  requests: [
    { key: "requests.create", labelKey: "submenu_add_request",
      grant: ["create", "request"] },
    { key: "requests.approve", labelKey: "submenu_approve_reject",
      grant: ["approve", "request"] },
    { key: "requests.list_all", labelKey: "submenu_all_requests",
      grant: ["view_all", "request"] },
  ],
  search: [
    { key: "search.basic", labelKey: "submenu_basic_search" },
    { key: "search.advanced", labelKey: "submenu_advanced_search" },
  ],
  report: [
    { key: "reports.build", labelKey: "submenu_create_report",
      grant: ["report", "all"] },
    { key: "audit.read", labelKey: "submenu_audit", grant: ["audit", "all"] },
  ],
};

const HELP_KEYS: Record<string, StringKey> = {
  login: "help_login",
  asset: "help_asset",
  license: "help_license",
  location: "help_location",
  person: "help_person",
  administration: "help_administration",
  faculty: "help_faculty",
  requests: "help_requests",
  search: "help_search",
  report: "help_report",
};

export function visibleItems(items: MenuItem[],
                             session: SessionInfo | null): MenuItem[] {
  if (session === null) return [];
  const held = grantSet(session);
  return items.filter((item) => !item.grant || held.has(grantKey(item.grant)));
}

export function renderMainMenu(session: SessionInfo | null,
                               language: Language): string {
  const strings = bundle(language);
  const parts = [`<nav><ul>`];
  for (const item of visibleItems(MAIN_MENU, session)) {
    parts.push(`<li><a href="#" data-page="${escapeHtml(item.key)}">` +
               `${escapeHtml(strings[item.labelKey])}</a></li>`);
  }
  if (session) {
    parts.push(`<li><a href="#" data-page="logout">` +
               `${escapeHtml(strings.menu_logout)}</a></li>`);
  }
  parts.push(`</ul></nav>`);
  return parts.join("");
}

export function renderSubmenu(page: string, session: SessionInfo | null,
                              language: Language): string {
  const strings = bundle(language);
  const items = visibleItems(SUBMENUS[page] ?? [], session);
  const parts = [`<menu>`];
  for (const item of items) {
    parts.push(`<li><a href="#" data-action="${escapeHtml(item.key)}">` +
               `${escapeHtml(strings[item.labelKey])}</a></li>`);
  }
  parts.push(`</menu>`);
  return parts.join("");
}

/** Per-page help panel (also what F1 opens). */
export function renderHelpPanel(page: string, language: Language): string {
  const strings = bundle(language);
  const key = HELP_KEYS[page] ?? "help_login";
  return `<aside class="help"><h2>${escapeHtml(strings.help_title)}</h2>` +
         `<p>${escapeHtml(strings[key])}</p></aside>`;
}

export function renderWelcome(language: Language): string {
  const strings = bundle(language);
  return `<section><h1>${escapeHtml(strings.welcome_title)}</h1><ul>` +
         `<li>${escapeHtml(strings.welcome_point_1)}</li>` +
         `<li>${escapeHtml(strings.welcome_point_2)}</li>` +
         `<li>${escapeHtml(strings.welcome_point_3)}</li>` +
         `</ul></section>`;
}

export interface LoginPageState {
  username: string;
  password: string;
  language: Language;
  error: string | null;
  challengeId: string | null;   // biometric second step when set
  sample: string;
}

export function blankLogin(language: Language = "en"): LoginPageState {
  return { username: "", password: "", language, error: null,
           challengeId: null, sample: "" };
}

export function renderLoginPage(state: LoginPageState): string {
  const strings = bundle(state.language);
  const parts = [`<form data-form="login"><h1>${escapeHtml(strings.login_title)}</h1>`];
  if (state.error) {
    parts.push(`<p class="error">${escapeHtml(state.error)}</p>`);
  }
  if (state.challengeId) {
    parts.push(`<p>${escapeHtml(strings.biometric_prompt)}</p>`);
    parts.push(`<input type="text" name="sample" value="${escapeHtml(state.sample)}"/>`);
    parts.push(`<button data-action="biometric">` +
               `${escapeHtml(strings.biometric_submit)}</button>`);
  } else {
    parts.push(`<label>${escapeHtml(strings.login_username)} ` +
               `<input type="text" name="username" ` +
               `value="${escapeHtml(state.username)}"/></label>`);
    parts.push(`<label>${escapeHtml(strings.login_password)} ` +
               `<input type="password" name="password" value=""/></label>`);
    parts.push(`<label>${escapeHtml(strings.login_language)} ` +
               `<select name="language">` +
               `<option value="en"${state.language === "en" ? ` selected="selected"` : ""}>English</option>` +
               `<option value="fr"${state.language === "fr" ? ` selected="selected"` : ""}>Français</option>` +
               `</select></label>`);
    parts.push(`<button data-action="login">` +
               `${escapeHtml(strings.login_submit)}</button>`);
  }
  parts.push(`</form>`);
  return parts.join("");
}

/** Report table straight from the JSON payload. */
export function renderReportTable(report: { columns: string[]; rows: string[][] },
                                  language: Language): string {
  const parts = [`<table><thead><tr>`];
  for (const column of report.columns) {
    parts.push(`<th>${escapeHtml(column)}</th>`);
  }
  parts.push(`</tr></thead><tbody>`);
  for (const row of report.rows) {
    parts.push(`<tr>` + row.map((cell) => `<td>${escapeHtml(cell)}</td>`).join("") +
               `</tr>`);
  }
  parts.push(`</tbody></table>`);
  return parts.join("");
}
