import { readFileSync } from "node:fs";

export function loadFixture<T>(name: string): T {
  const url = new URL(`./fixtures/${name}`, import.meta.url);
  return JSON.parse(readFileSync(url, "utf-8")) as T;
}

export interface RecordedRequest {
  url: string;
  method: string;
  body: unknown;
}

/** fetch stand-in fed by a queue of canned responses; records requests. */
export function fakeFetch(
  responses: { status?: number; body: unknown }[],
): { fetchFn: (input: string, init?: RequestInit) => Promise<Response>; requests: RecordedRequest[] } {
  const requests: RecordedRequest[] = [];
  const queue = [...responses];
  const fetchFn = async (input: string, init?: RequestInit): Promise<Response> => {
    requests.push({
      url: input,
      method: init?.method ?? "GET",
      body: init?.body ? JSON.parse(String(init.body)) : null,
    });
    const next = queue.shift();
    if (!next) {
      throw new Error(`no canned response left for ${input}`);
    }
    return new Response(JSON.stringify(next.body), {
      status: next.status ?? 200,
      headers: { "content-type": "application/json" },
    });
  };
  return { fetchFn, requests };
}
