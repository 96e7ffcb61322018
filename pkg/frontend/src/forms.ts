// Form flows. Submitted values always survive a failed submit: on any
// API error the envelope's echoed `submitted` map is written back into
// the form, field errors are shown inline, and option lists (dropdown
// contents) are never touched by error handling.

import { ApiError, ImportOutcome, InventoryApi } from "./api.js";
import { StringKey } from "./i18n.js";

export interface FormState {
  values: Record<string, string>;
  fieldErrors: Record<string, string>;
  banner: string | null;
  dirty: boolean;
}

export function blankForm(initial: Record<string, string> = {}): FormState {
  return { values: { ...initial }, fieldErrors: {}, banner: null, dirty: false };
}

export function setValue(form: FormState, name: string, value: string): void {
  form.values[name] = value;
  form.dirty = true;
}

/** Repopulate from the error envelope so nothing the user typed is lost. */
export function applyApiError(form: FormState, error: ApiError): void {
  form.banner = error.body.message;
  form.fieldErrors = { ...(error.body.field_errors ?? {}) };
  const submitted = error.body.submitted;
  if (submitted) {
    for (const [name, value] of Object.entries(submitted)) {
      if (value === null || value === undefined) continue;
      if (typeof value === "object") continue; // composite fields keep local state
      form.values[name] = String(value);
    }
  }
}

/** Dirty forms ask before the page goes away. */
export function confirmLeave(form: FormState,
                             confirmFn: (message: string) => boolean,
                             strings: Record<StringKey, string>): boolean {
  if (!form.dirty) return true;
  return confirmFn(strings.form_confirm_leave);
}

export interface SelectOption {
  value: string;
  label: string;
}

export class AssetForm {
  form = blankForm({ asset_type: "", location_id: "", status: "available" });
  // dropdown contents live here and survive failed submits untouched
  locationOptions: SelectOption[];
  typeOptions: string[];
  statusOptions: string[];
  created: Record<string, unknown> | null = null;

  constructor(private api: InventoryApi,
              locationOptions: SelectOption[],
              typeOptions: string[],
              statusOptions: string[]) {
    this.locationOptions = locationOptions;
    this.typeOptions = typeOptions;
    this.statusOptions = statusOptions;
  }

  async submit(): Promise<boolean> {
    const payload: Record<string, unknown> = {};
    for (const [name, value] of Object.entries(this.form.values)) {
      if (value !== "") payload[name] = name === "location_id" ? Number(value) : value;
    }
    try {
      this.created = await this.api.create("assets", payload);
      this.form = blankForm({ asset_type: "", location_id: "", status: "available" });
      return true;
    } catch (error) {
      if (error instanceof ApiError) {
        applyApiError(this.form, error);
        return false;
      }
      throw error;
    }
  }
}

export class ImportForm {
  form = blankForm({ text: "", column_count: "", column_mapping: "",
                     default_location: "" });
  locationOptions: SelectOption[];
  outcome: ImportOutcome | null = null;

  constructor(private api: InventoryApi, public kind: string,
              locationOptions: SelectOption[]) {
    this.locationOptions = locationOptions;
  }

  async submit(): Promise<boolean> {
    const mapping = this.form.values.column_mapping
      .split(",").map((name) => name.trim()).filter((name) => name !== "");
    const payload: Record<string, unknown> = {
      text: this.form.values.text,
      column_count: Number(this.form.values.column_count || mapping.length),
      column_mapping: mapping,
    };
    if (this.form.values.default_location !== "") {
      payload.default_location = Number(this.form.values.default_location);
    }
    try {
      this.outcome = await this.api.importCsv(this.kind, payload);
      this.form.dirty = false;
      this.form.banner = null;
      this.form.fieldErrors = {};
      return true;
    } catch (error) {
      if (error instanceof ApiError) {
        applyApiError(this.form, error); // pasted text comes back with the echo
        return false;
      }
      throw error;
    }
  }
}

export class GroupForm {
  masterId: number | null = null;
  children = new Set<number>();
  groupType = "Group";
  banner: string | null = null;

  constructor(private api: InventoryApi,
              private strings: Record<StringKey, string>) {}

  /** "Add Child" only unlocks once a master was picked. */
  get canAddChild(): boolean {
    return this.masterId !== null;
  }

  addMaster(id: number): void {
    this.masterId = id;
    this.children.delete(id);
    this.banner = null;
  }

  addChild(id: number): boolean {
    if (!this.canAddChild) {
      this.banner = this.strings.group_needs_master;
      return false;
    }
    if (id === this.masterId) return false;
    this.children.add(id);
    this.banner = null;
    return true;
  }

  async submit(): Promise<boolean> {
    if (this.masterId === null || this.children.size === 0) {
      this.banner = this.strings.group_needs_children;
      return false;
    }
    try {
      await this.api.createGroup(this.masterId, [...this.children], this.groupType);
      this.banner = null;
      return true;
    } catch (error) {
      if (error instanceof ApiError) {
        this.banner = error.body.message;
        return false;
      }
      throw error;
    }
  }
}

export class RequestForm {
  form = blankForm({ request_type: "Movement", description: "", period: "",
                     location_to: "" });
  items: { assetId: number | null; itemType: string }[] = [];
  created: Record<string, unknown> | null = null;

  constructor(private api: InventoryApi) {}

  addItem(assetId: number | null, itemType: string): void {
    this.items.push({ assetId, itemType });
    this.form.dirty = true;
  }

  async submit(): Promise<boolean> {
    const payload: Record<string, unknown> = {
      request_type: this.form.values.request_type,
      description: this.form.values.description,
      items: this.items.map((item) => [item.assetId, item.itemType]),
    };
    if (this.form.values.location_to !== "") {
      payload.location_to = Number(this.form.values.location_to);
    }
    if (this.form.values.period !== "") {
      payload.period = Number(this.form.values.period);
    }
    try {
      this.created = await this.api.createRequest(payload);
      this.form.dirty = false;
      return true;
    } catch (error) {
      if (error instanceof ApiError) {
        applyApiError(this.form, error);
        return false;
      }
      throw error;
    }
  }
}

export class RoleEditForm {
  form = blankForm({ description: "", level_name: "" });
  grants: [string, string][] = [];

  constructor(private api: InventoryApi, public roleId: string) {}

  async submit(): Promise<boolean> {
    const payload: Record<string, unknown> = {};
    if (this.form.values.description !== "") {
      payload.description = this.form.values.description;
    }
    if (this.form.values.level_name !== "") {
      payload.level_name = this.form.values.level_name;
    }
    if (this.grants.length > 0) payload.grants = this.grants;
    try {
      await this.api.editRole(this.roleId, payload);
      this.form.dirty = false;
      return true;
    } catch (error) {
      if (error instanceof ApiError) {
        applyApiError(this.form, error);
        return false;
      }
      throw error;
    }
  }
}
