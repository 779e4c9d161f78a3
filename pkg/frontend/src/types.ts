// Payload shapes of the local HTTP API, plus the view state that drives
// rendering. The view state round-trips through the URL fragment so a
// configured view can be shared as a deep link.

export interface NetworkNode {
  id: string;
  sort: string;
  source: string;
  title: string | null;
}

export interface NetworkEdge {
  id: string;
  from: string;
  to: string;
  meaning: string | null;
  sort_pair: [string, string];
  source_pair: [string, string];
  notes: string;
}

export interface NetworkPayload {
  nodes: NetworkNode[];
  edges: NetworkEdge[];
}

export interface MetricPayload {
  name: string;
  params: Record<string, unknown>;
  values: Record<string, number>;
}

export interface ClusterPayload {
  method: string;
  assignment: Record<string, number>;
  quality: number | null;
}

export interface PropagatePayload {
  changed: string;
  affected: string[];
  hop_distance: Record<string, number>;
}

export interface RecordFieldsPayload {
  sort: string;
  source: string;
  title: string;
  notes: string;
  content: string;
  state: string | null;
}

export interface NerveDetail {
  id: string;
  ref: string[];
  record: string;
  fields: RecordFieldsPayload;
  width: number;
  depth: number;
}

export interface ApiErrorPayload {
  code: string;
  message: string;
  details: Record<string, unknown>;
}

export const SIZE_METRICS = [
  "degree",
  "in_degree",
  "out_degree",
  "pagerank",
  "betweenness",
  "katz",
  "hits_hub",
  "hits_authority",
  "dag_depth",
  "reachability",
] as const;

export const CATEGORICAL_COLORS = ["sort", "community", "spectral"] as const;
export const CONTINUOUS_COLORS = ["pagerank", "betweenness", "dag_depth"] as const;
export const CLUSTER_METHODS = [
  "none",
  "louvain",
  "greedy_modularity",
  "spectral",
  "by_sort",
  "by_depth",
] as const;

export type ColorMode =
  | (typeof CATEGORICAL_COLORS)[number]
  | (typeof CONTINUOUS_COLORS)[number];

export interface ViewState {
  sizeMetric: string;
  colorMode: ColorMode;
  clusterMethod: string;
  tightness: number; // always within [0, 1]
  selected: string | null;
  sourceFilter: string | null;
  reverse: boolean;
  seed: number;
}

export const DEFAULT_VIEW: ViewState = {
  sizeMetric: "pagerank",
  colorMode: "sort",
  clusterMethod: "none",
  tightness: 0.5,
  selected: null,
  sourceFilter: null,
  reverse: false,
  seed: 0,
};

function clamp01(x: number): number {
  if (!Number.isFinite(x)) return 0;
  return Math.min(1, Math.max(0, x));
}

/** Serialize a view state into a URL fragment (without the leading '#'). */
export function encodeView(view: ViewState): string {
  const q = new URLSearchParams();
  q.set("size", view.sizeMetric);
  q.set("color", view.colorMode);
  q.set("cluster", view.clusterMethod);
  q.set("t", String(view.tightness));
  q.set("seed", String(view.seed));
  if (view.selected !== null) q.set("sel", view.selected);
  if (view.sourceFilter !== null) q.set("src", view.sourceFilter);
  if (view.reverse) q.set("rev", "1");
  return q.toString();
}

/** Parse a URL fragment back into a view state; missing keys fall back to defaults. */
export function decodeView(fragment: string): ViewState {
  const q = new URLSearchParams(fragment.replace(/^#/, ""));
  const color = q.get("color") ?? DEFAULT_VIEW.colorMode;
  const allColors: readonly string[] = [...CATEGORICAL_COLORS, ...CONTINUOUS_COLORS];
  return {
    sizeMetric: q.get("size") ?? DEFAULT_VIEW.sizeMetric,
    colorMode: (allColors.includes(color) ? color : DEFAULT_VIEW.colorMode) as ColorMode,
    clusterMethod: q.get("cluster") ?? DEFAULT_VIEW.clusterMethod,
    tightness: q.has("t") ? clamp01(Number(q.get("t"))) : DEFAULT_VIEW.tightness,
    selected: q.get("sel"),
    sourceFilter: q.get("src"),
    reverse: q.get("rev") === "1",
    seed: q.has("seed") ? Math.trunc(Number(q.get("seed"))) || 0 : DEFAULT_VIEW.seed,
  };
}

/** Throw with a readable message unless the value looks like a network payload. */
export function validateNetwork(raw: unknown): NetworkPayload {
  if (typeof raw !== "object" || raw === null) {
    throw new Error("network payload is not an object");
  }
  const obj = raw as Record<string, unknown>;
  if (!Array.isArray(obj.nodes) || !Array.isArray(obj.edges)) {
    throw new Error("network payload must carry nodes[] and edges[]");
  }
  for (const n of obj.nodes) {
    const node = n as Record<string, unknown>;
    if (typeof node.id !== "string" || typeof node.sort !== "string") {
      throw new Error("network node missing id/sort");
    }
  }
  const ids = new Set((obj.nodes as NetworkNode[]).map((n) => n.id));
  for (const e of obj.edges) {
    const edge = e as Record<string, unknown>;
    if (typeof edge.from !== "string" || typeof edge.to !== "string") {
      throw new Error("network edge missing from/to");
    }
    if (!ids.has(edge.from) || !ids.has(edge.to)) {
      throw new Error(`network edge ${String(edge.id)} points outside the node set`);
    }
  }
  return raw as NetworkPayload;
}
