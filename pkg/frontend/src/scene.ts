// Turns a network payload plus server-computed numbers into a drawable
// scene: positioned nodes with metric-driven radii and colors, and edges
// with explicit geometry. Parallel and opposite edges between the same
// endpoints bow apart so a 2-cycle shows as two distinct curved arrows.
// No graph quantity is computed here; values arrive from the API as-is.

import type { NetworkPayload, ViewState } from "./types.js";

export interface SceneNode {
  id: string;
  x: number;
  y: number;
  radius: number;
  fill: string;
  label: string;
  /** Hop distance when the node is in the active propagation set. */
  hop: number | null;
  /** Highlight ring color derived from the hop distance, if any. */
  ring: string | null;
  selected: boolean;
}

export interface SceneEdge {
  id: string;
  x1: number;
  y1: number;
  x2: number;
  y2: number;
  /** Quadratic control point; equals the midpoint for straight edges. */
  cx: number;
  cy: number;
  /** Signed bow amount; 0 means drawn straight. */
  curve: number;
  label: string;
}

export interface Scene {
  nodes: SceneNode[];
  edges: SceneEdge[];
}

export interface SceneInputs {
  view: ViewState;
  positions: Map<string, { x: number; y: number }>;
  /** Values of the selected size metric, from GET /api/metrics. */
  sizeValues: Record<string, number> | null;
  /** Values of a continuous color metric, when the color mode needs one. */
  colorValues: Record<string, number> | null;
  /** Cluster labels, from GET /api/cluster, for categorical coloring. */
  clusterLabels: Record<string, number> | null;
  /** Propagation hop distances, from POST /api/propagate. */
  highlight: Record<string, number> | null;
}

const MIN_RADIUS = 7;
const MAX_RADIUS = 22;
const BOW = 28;

const SORT_COLORS: Record<string, string> = {
  definition: "#4c8dd6",
  lemma: "#58a866",
  theorem: "#c8762c",
  proof: "#9069b8",
  unknown: "#8a8f98",
};

const PALETTE = [
  "#4c8dd6",
  "#c8762c",
  "#58a866",
  "#9069b8",
  "#c2534f",
  "#3aa6a6",
  "#b0a030",
  "#b05e92",
];

function minMax(values: number[]): { lo: number; hi: number } {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  return { lo, hi };
}

/** Monotone radius from a metric value: min-max normalized, sqrt eased. */
export function radiusFor(
  value: number | undefined,
  lo: number,
  hi: number,
): number {
  if (value === undefined || !Number.isFinite(value)) return MIN_RADIUS;
  if (hi <= lo) return (MIN_RADIUS + MAX_RADIUS) / 2;
  const t = (value - lo) / (hi - lo);
  return MIN_RADIUS + (MAX_RADIUS - MIN_RADIUS) * Math.sqrt(t);
}

/** Single-hue ramp for continuous color modes, min-max normalized. */
export function rampColor(value: number | undefined, lo: number, hi: number): string {
  if (value === undefined || !Number.isFinite(value) || hi <= lo) {
    return "hsl(215, 55%, 60%)";
  }
  const t = (value - lo) / (hi - lo);
  const light = 85 - 50 * t;
  return `hsl(215, 70%, ${Math.round(light)}%)`;
}

function hopRing(hop: number, maxHop: number): string {
  const span = Math.max(1, maxHop - 1);
  const t = maxHop <= 1 ? 0 : (hop - 1) / span;
  const light = 45 + 30 * t;
  return `hsl(25, 95%, ${Math.round(light)}%)`;
}

function nodeLabel(id: string, title: string | null): string {
  if (title) return title;
  return id.length > 8 ? id.slice(0, 8) : id;
}

export function buildScene(net: NetworkPayload, inputs: SceneInputs): Scene {
  const { view, positions } = inputs;

  const sizeSpan = inputs.sizeValues
    ? minMax(Object.values(inputs.sizeValues))
    : { lo: 0, hi: 0 };
  const colorSpan = inputs.colorValues
    ? minMax(Object.values(inputs.colorValues))
    : { lo: 0, hi: 0 };
  const maxHop = inputs.highlight
    ? Math.max(0, ...Object.values(inputs.highlight))
    : 0;

  const nodes: SceneNode[] = net.nodes.map((n) => {
    const pos = positions.get(n.id) ?? { x: 0, y: 0 };
    let fill: string;
    if (inputs.colorValues) {
      fill = rampColor(inputs.colorValues[n.id], colorSpan.lo, colorSpan.hi);
    } else if (inputs.clusterLabels && view.colorMode !== "sort") {
      const label = inputs.clusterLabels[n.id];
      fill =
        label === undefined
          ? SORT_COLORS.unknown!
          : PALETTE[label % PALETTE.length]!;
    } else {
      fill = SORT_COLORS[n.sort] ?? SORT_COLORS.unknown!;
    }
    const hop = inputs.highlight ? inputs.highlight[n.id] ?? null : null;
    return {
      id: n.id,
      x: pos.x,
      y: pos.y,
      radius: inputs.sizeValues
        ? radiusFor(inputs.sizeValues[n.id], sizeSpan.lo, sizeSpan.hi)
        : MIN_RADIUS + 3,
      fill,
      label: nodeLabel(n.id, n.title),
      hop,
      ring: hop === null ? null : hopRing(hop, maxHop),
      selected: view.selected === n.id,
    };
  });

  // Edges sharing an endpoint pair (either direction) bow apart.
  const groups = new Map<string, string[]>();
  for (const e of net.edges) {
    const key = e.from < e.to ? `${e.from}|${e.to}` : `${e.to}|${e.from}`;
    const bucket = groups.get(key) ?? [];
    bucket.push(e.id);
    groups.set(key, bucket);
  }
  for (const bucket of groups.values()) bucket.sort();

  const edges: SceneEdge[] = net.edges.map((e) => {
    const a = positions.get(e.from) ?? { x: 0, y: 0 };
    const b = positions.get(e.to) ?? { x: 0, y: 0 };
    const key = e.from < e.to ? `${e.from}|${e.to}` : `${e.to}|${e.from}`;
    const bucket = groups.get(key)!;
    let curve = 0;
    if (bucket.length > 1) {
      const slot = bucket.indexOf(e.id);
      const spread = slot - (bucket.length - 1) / 2;
      // Flip with edge direction so opposite arrows bow to opposite sides.
      const orient = e.from < e.to ? 1 : -1;
      curve = BOW * orient * 2 * spread;
    }
    const mx = (a.x + b.x) / 2;
    const my = (a.y + b.y) / 2;
    const dx = b.x - a.x;
    const dy = b.y - a.y;
    const len = Math.sqrt(dx * dx + dy * dy) || 1;
    // Perpendicular offset of the control point produces the bow.
    const cx = mx + (-dy / len) * curve;
    const cy = my + (dx / len) * curve;
    return {
      id: e.id,
      x1: a.x,
      y1: a.y,
      x2: b.x,
      y2: b.y,
      cx,
      cy,
      curve,
      label: e.meaning ?? "",
    };
  });

  return { nodes, edges };
}
