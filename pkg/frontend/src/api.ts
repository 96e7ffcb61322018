// Typed client for the inventory JSON API. The fetch implementation is
// injected so tests can run against a scripted double, and the session
// token is attached as a bearer header (the cookie works too when the
// client runs in a browser).

export interface ApiErrorBody {
  code: string;
  message: string;
  field_errors?: Record<string, string>;
  submitted?: Record<string, unknown>;
}

export class ApiError extends Error {
  constructor(public status: number, public body: ApiErrorBody) {
    super(body.message);
    this.name = "ApiError";
  }
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export interface SessionInfo {
  token: string;
  person_id: number;
  username: string;
  language: string;
  level: string;
  grants: [string, string][];
}

export interface ChallengeInfo {
  challenge_id: string;
  status: string;
}

export interface ListResult {
  rows: Record<string, unknown>[];
  total: number;
  page: number;
  page_size: number;
}

export interface UnitResult {
  object_name: string;
  columns: string[];
  rows: string[][];
  count: number;
}

export interface SearchResult {
  results: UnitResult[];
  combined: string[][];
  total: number;
}

export interface ImportOutcome {
  created: number[];
  failed: { row: number; reason: string }[];
  total_rows: number;
}

export class InventoryApi {
  token: string | null = null;

  constructor(private fetchImpl: FetchLike, private base: string = "") {}

  private async request(method: string, path: string, body?: unknown): Promise<unknown> {
    const headers: Record<string, string> = { "Content-Type": "application/json" };
    if (this.token) headers["Authorization"] = `Bearer ${this.token}`;
    const response = await this.fetchImpl(this.base + path, {
      method,
      headers,
      body: body === undefined ? undefined : JSON.stringify(body),
      credentials: "same-origin",
    });
    const text = await response.text();
    const parsed = text ? JSON.parse(text) : {};
    if (!response.ok) {
      throw new ApiError(response.status, parsed as ApiErrorBody);
    }
    return parsed;
  }

  // session
  async login(username: string, password: string):
      Promise<{ session?: SessionInfo; challenge?: ChallengeInfo }> {
    const body = await this.request("POST", "/login", { username, password }) as {
      session?: SessionInfo; challenge?: ChallengeInfo };
    if (body.session) this.token = body.session.token;
    return body;
  }

  async completeBiometric(challengeId: string, sample: string): Promise<SessionInfo> {
    const body = await this.request("POST", "/login/biometric", {
      challenge_id: challengeId, sample }) as { session: SessionInfo };
    this.token = body.session.token;
    return body.session;
  }

  async logout(): Promise<string> {
    const body = await this.request("POST", "/logout") as { message: string };
    this.token = null;
    return body.message;
  }

  async getLanguage(): Promise<string> {
    const body = await this.request("GET", "/session/language") as { language: string };
    return body.language;
  }

  async setLanguage(code: string): Promise<void> {
    await this.request("POST", "/session/language", { code });
  }

  // entities
  list(plural: string, query: string): Promise<ListResult> {
    const suffix = query ? `?${query}` : "";
    return this.request("GET", `/${plural}${suffix}`) as Promise<ListResult>;
  }

  get(plural: string, id: number): Promise<Record<string, unknown>> {
    return this.request("GET", `/${plural}/${id}`) as Promise<Record<string, unknown>>;
  }

  create(plural: string, payload: Record<string, unknown>): Promise<Record<string, unknown>> {
    return this.request("POST", `/${plural}`, payload) as Promise<Record<string, unknown>>;
  }

  update(plural: string, id: number, payload: Record<string, unknown>):
      Promise<Record<string, unknown>> {
    return this.request("PUT", `/${plural}/${id}`, payload) as Promise<Record<string, unknown>>;
  }

  remove(plural: string, id: number): Promise<unknown> {
    return this.request("DELETE", `/${plural}/${id}`);
  }

  assetHistory(id: number): Promise<{ records: Record<string, unknown>[] }> {
    return this.request("GET", `/assets/${id}/history`) as
      Promise<{ records: Record<string, unknown>[] }>;
  }

  createGroup(masterId: number, children: number[], groupType: string): Promise<unknown> {
    return this.request("POST", "/assets/groups", {
      master_id: masterId, children, group_type: groupType });
  }

  importCsv(kind: string, payload: Record<string, unknown>): Promise<ImportOutcome> {
    return this.request("POST", `/import/${kind}`, payload) as Promise<ImportOutcome>;
  }

  assign(relation: string, fromId: number, toId: number | string,
         attrs?: Record<string, unknown>): Promise<unknown> {
    return this.request("POST", `/assign/${relation}`, {
      from_id: fromId, to_id: toId, attrs });
  }

  // requests
  createRequest(payload: Record<string, unknown>): Promise<Record<string, unknown>> {
    return this.request("POST", "/requests", payload) as Promise<Record<string, unknown>>;
  }

  listRequests(scope: string): Promise<{ rows: Record<string, unknown>[]; total: number }> {
    return this.request("GET", `/requests?scope=${scope}`) as
      Promise<{ rows: Record<string, unknown>[]; total: number }>;
  }

  approveRequest(id: number): Promise<Record<string, unknown>> {
    return this.request("POST", `/requests/${id}/approve`, {}) as
      Promise<Record<string, unknown>>;
  }

  rejectRequest(id: number, reason: string): Promise<Record<string, unknown>> {
    return this.request("POST", `/requests/${id}/reject`, { reason }) as
      Promise<Record<string, unknown>>;
  }

  completeRequest(id: number): Promise<Record<string, unknown>> {
    return this.request("POST", `/requests/${id}/complete`, {}) as
      Promise<Record<string, unknown>>;
  }

  // search
  searchBasic(query: string): Promise<SearchResult> {
    return this.request("GET", `/search/basic?q=${encodeURIComponent(query)}`) as
      Promise<SearchResult>;
  }

  searchAdvanced(units: { table: string; columns: string[] }[], query: string):
      Promise<SearchResult> {
    return this.request("POST", "/search/advanced", { units, q: query }) as
      Promise<SearchResult>;
  }

  // reports
  report(kind: string): Promise<{ kind: string; columns: string[]; rows: string[][] }> {
    return this.request("GET", `/reports/${kind}`) as
      Promise<{ kind: string; columns: string[]; rows: string[][] }>;
  }

  audit(query: string): Promise<{ rows: Record<string, unknown>[]; total: number }> {
    const suffix = query ? `?${query}` : "";
    return this.request("GET", `/audit${suffix}`) as
      Promise<{ rows: Record<string, unknown>[]; total: number }>;
  }

  profile(): Promise<Record<string, unknown>> {
    return this.request("GET", "/profile") as Promise<Record<string, unknown>>;
  }

  roles(): Promise<{ rows: Record<string, unknown>[] }> {
    return this.request("GET", "/roles") as Promise<{ rows: Record<string, unknown>[] }>;
  }

  editRole(roleId: string, payload: Record<string, unknown>): Promise<unknown> {
    return this.request("PUT", `/roles/${roleId}`, payload);
  }
}

/** Grant pairs charged by the API per UI action; menus hide what the
 *  server would reject, and a contract test keeps both lists aligned. */
export const ROUTE_GRANTS: Record<string, [string, string]> = {
  "assets.list": ["read", "asset"],
  "assets.create": ["create", "asset"],
  "assets.update": ["update", "asset"],
  "assets.delete": ["delete", "asset"],
  "assets.group": ["create", "asset"],
  "assets.import": ["import", "asset"],
  "assets.assign_person": ["assign", "asset"],
  "assets.assign_location": ["assign", "asset"],
  "licenses.list": ["read", "license"],
  "licenses.create": ["create", "license"],
  "licenses.update": ["update", "license"],
  "licenses.delete": ["delete", "license"],
  "licenses.import": ["import", "license"],
  "licenses.assign_asset": ["assign", "license"],
  "locations.list": ["read", "location"],
  "locations.create": ["create", "location"],
  "locations.update": ["update", "location"],
  "locations.delete": ["delete", "location"],
  "locations.import": ["import", "location"],
  "locations.assign_department": ["assign", "location"],
  "persons.list": ["read", "person"],
  "faculties.list": ["read", "faculty"],
  "faculties.create": ["create", "faculty"],
  "requests.create": ["create", "request"],
  "requests.approve": ["approve", "request"],
  "requests.complete": ["complete", "request"],
  "requests.list_all": ["view_all", "request"],
  "roles.read": ["read", "role"],
  "roles.edit": ["edit", "role"],
  "roles.assign": ["assign", "role"],
  "reports.build": ["report", "all"],
  "audit.read": ["audit", "all"],
  "profile.read": ["read", "profile"],
};

export function grantKey(grant: [string, string]): string {
  return `${grant[0]}:${grant[1]}`;
}

export function grantSet(session: SessionInfo): Set<string> {
  return new Set(session.grants.map((pair) => grantKey(pair)));
}
