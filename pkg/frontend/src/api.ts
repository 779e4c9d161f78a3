// Thin client over the local HTTP JSON API. Every number the page shows
// flows through here; nothing downstream recomputes graph quantities.

import type {
  ApiErrorPayload,
  ClusterPayload,
  MetricPayload,
  NerveDetail,
  NetworkPayload,
  PropagatePayload,
} from "./types.js";
import { validateNetwork } from "./types.js";

export type FetchLike = (
  input: string,
  init?: RequestInit,
) => Promise<Response>;

export class ApiError extends Error {
  readonly code: string;
  readonly status: number;

  constructor(status: number, payload: ApiErrorPayload | null) {
    super(payload?.message ?? `request failed with status ${status}`);
    this.code = payload?.code ?? "http_error";
    this.status = status;
  }
}

async function asError(response: Response): Promise<ApiError> {
  let payload: ApiErrorPayload | null = null;
  try {
    payload = (await response.json()) as ApiErrorPayload;
  } catch {
    payload = null;
  }
  return new ApiError(response.status, payload);
}

export class Api {
  constructor(
    private readonly base: string = "",
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async getJson<T>(path: string): Promise<T> {
    const response = await this.fetchFn(this.base + path);
    if (!response.ok) throw await asError(response);
    return (await response.json()) as T;
  }

  async network(): Promise<NetworkPayload> {
    const raw = await this.getJson<unknown>("/api/network");
    return validateNetwork(raw);
  }

  async metric(
    name: string,
    source: string | null,
    seed: number,
  ): Promise<MetricPayload> {
    const q = new URLSearchParams({ name, seed: String(seed) });
    if (source !== null) q.set("source", source);
    return this.getJson<MetricPayload>(`/api/metrics?${q}`);
  }

  async clusterAssignment(
    method: string,
    k: number,
    seed: number,
    source: string | null,
  ): Promise<ClusterPayload> {
    const q = new URLSearchParams({
      method,
      k: String(k),
      seed: String(seed),
    });
    if (source !== null) q.set("source", source);
    return this.getJson<ClusterPayload>(`/api/cluster?${q}`);
  }

  async propagate(id: string, reverse: boolean): Promise<PropagatePayload> {
    const response = await this.fetchFn(`${this.base}/api/propagate`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ id, reverse }),
    });
    if (!response.ok) throw await asError(response);
    return (await response.json()) as PropagatePayload;
  }

  async nerve(id: string): Promise<NerveDetail> {
    return this.getJson<NerveDetail>(`/api/nerve/${encodeURIComponent(id)}`);
  }

  async createNerve(record: string, refs?: string[]): Promise<{ id: string }> {
    const body: { record: string; refs?: string[] } = { record };
    if (refs && refs.length > 0) body.refs = refs;
    const response = await this.fetchFn(`${this.base}/api/nerve`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
    if (!response.ok) throw await asError(response);
    return (await response.json()) as { id: string };
  }

  /** One ETag poll step: reports whether the store changed since `known`. */
  async storeChanged(
    known: string | null,
  ): Promise<{ etag: string | null; changed: boolean }> {
    const headers: Record<string, string> = {};
    if (known !== null) headers["If-None-Match"] = known;
    const response = await this.fetchFn(`${this.base}/api/store`, { headers });
    if (response.status === 304) return { etag: known, changed: false };
    if (!response.ok) throw await asError(response);
    const etag = response.headers.get("ETag");
    return { etag, changed: known !== null };
  }
}
