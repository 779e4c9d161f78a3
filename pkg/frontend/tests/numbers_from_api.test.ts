// Interception check: every number the page displays comes from an API
// response, never from client-side graph math. The stubbed server returns
// values no real metric could produce (negative, irrational, > 1); if the
// client recomputed, rounded, or normalized anything, these assertions
// would fail.

import { describe, expect, it } from "vitest";
import { Api } from "../src/api.js";
import { buildPanelModel } from "../src/panel.js";
import { buildScene, radiusFor } from "../src/scene.js";
import { DEFAULT_VIEW, type NerveDetail, type NetworkPayload } from "../src/types.js";

const FAKE_METRIC = {
  name: "pagerank",
  params: { seed: 0 },
  // Deliberately impossible pagerank values.
  values: { D1: 0.125, D2: 7, L1: -3, T1: 0.6180339887498949 },
};

const NET: NetworkPayload = {
  nodes: [
    { id: "D1", sort: "definition", source: "s", title: null },
    { id: "D2", sort: "definition", source: "s", title: null },
    { id: "L1", sort: "lemma", source: "s", title: null },
    { id: "T1", sort: "theorem", source: "s", title: null },
  ],
  edges: [],
};

function jsonResponse(body: unknown): Response {
  return new Response(JSON.stringify(body), {
    status: 200,
    headers: { "content-type": "application/json" },
  });
}

describe("displayed numbers equal API responses", () => {
  it("metric values pass through the client untouched", async () => {
    const urls: string[] = [];
    const api = new Api("", async (url) => {
      urls.push(url);
      return jsonResponse(FAKE_METRIC);
    });
    const payload = await api.metric("pagerank", null, 0);
    expect(payload.values).toEqual(FAKE_METRIC.values);
    expect(urls).toEqual(["/api/metrics?name=pagerank&seed=0"]);
  });

  it("the inspector prints the server's number verbatim", () => {
    const detail: NerveDetail = {
      id: "abcdef012345",
      ref: [],
      record: "theorem : T1",
      fields: {
        sort: "theorem",
        source: "s",
        title: "T1",
        notes: "",
        content: "T1",
        state: null,
      },
      width: 13,
      depth: 4,
    };
    const model = buildPanelModel(detail, "pagerank", FAKE_METRIC.values.T1);
    const row = model.rows.find((r) => r.label === "pagerank")!;
    // Full precision, no rounding, no reformatting.
    expect(row.value).toBe("0.6180339887498949");
    expect(model.rows.find((r) => r.label === "width")!.value).toBe("13");
    expect(model.rows.find((r) => r.label === "depth")!.value).toBe("4");
  });

  it("node sizes follow the server's ordering, impossible or not", () => {
    const scene = buildScene(NET, {
      view: DEFAULT_VIEW,
      positions: new Map(NET.nodes.map((n, i) => [n.id, { x: i * 50, y: 0 }])),
      sizeValues: FAKE_METRIC.values,
      colorValues: null,
      clusterLabels: null,
      highlight: null,
    });
    const radius = Object.fromEntries(scene.nodes.map((n) => [n.id, n.radius]));
    // Server says D2 (7) > T1 (0.618...) > D1 (0.125) > L1 (-3); a client
    // that recomputed pagerank would order these very differently.
    expect(radius.D2).toBeGreaterThan(radius.T1!);
    expect(radius.T1).toBeGreaterThan(radius.D1!);
    expect(radius.D1).toBeGreaterThan(radius.L1!);
    // And the mapping is exactly the declared min-max shape.
    expect(radius.T1).toBe(radiusFor(FAKE_METRIC.values.T1, -3, 7));
  });

  it("propagation hop distances come from the response body", async () => {
    const api = new Api("", async () =>
      jsonResponse({
        changed: "D1",
        affected: ["T1", "L1"],
        hop_distance: { T1: 9, L1: 2 },
      }),
    );
    const result = await api.propagate("D1", false);
    expect(result.hop_distance).toEqual({ T1: 9, L1: 2 });

    const scene = buildScene(NET, {
      view: DEFAULT_VIEW,
      positions: new Map(NET.nodes.map((n, i) => [n.id, { x: i * 50, y: 0 }])),
      sizeValues: null,
      colorValues: null,
      clusterLabels: null,
      highlight: result.hop_distance,
    });
    const byId = Object.fromEntries(scene.nodes.map((n) => [n.id, n]));
    expect(byId.T1!.hop).toBe(9);
    expect(byId.L1!.hop).toBe(2);
    expect(byId.D1!.hop).toBeNull();
  });
});
