// Scripted fetch double: tests declare responses per (method, path) and
// get a call log back for asserting what left the page.

import { FetchLike } from "../src/api.js";

export interface RecordedCall {
  method: string;
  url: string;
  body?: unknown;
}

export type Responder = (call: RecordedCall) =>
  { status: number; body: unknown } | undefined;

export function mockApi(responder: Responder): { fetch: FetchLike; log: RecordedCall[] } {
  const log: RecordedCall[] = [];
  const fetchImpl: FetchLike = async (url, init) => {
    const call: RecordedCall = {
      method: init?.method ?? "GET",
      url: String(url),
      body: init?.body ? JSON.parse(String(init.body)) : undefined,
    };
    log.push(call);
    const scripted = responder(call) ?? { status: 404, body: { code: "not_found", message: "no route" } };
    return new Response(JSON.stringify(scripted.body), {
      status: scripted.status,
      headers: { "Content-Type": "application/json" },
    });
  };
  return { fetch: fetchImpl, log };
}

export function okJson(body: unknown): { status: number; body: unknown } {
  return { status: 200, body };
}
