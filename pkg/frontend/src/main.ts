// Page wiring: fetch data, lay out, draw, and route clicks. Heavy logic
// lives in the imported modules; this file only connects them to the DOM.

import { Api, ApiError } from "./api.js";
import { Explorer } from "./controller.js";
import { ForceLayout } from "./layout.js";
import { buildPanelModel, type PanelModel } from "./panel.js";
import { drawScene } from "./render.js";
import { buildScene, type Scene } from "./scene.js";
import {
  CONTINUOUS_COLORS,
  DEFAULT_VIEW,
  decodeView,
  encodeView,
  type ClusterPayload,
  type MetricPayload,
  type NetworkPayload,
  type ViewState,
} from "./types.js";

const params = new URLSearchParams(window.location.search);
const api = new Api(params.get("api") ?? "http://127.0.0.1:8787");
const explorer = new Explorer(api);

const canvas = document.getElementById("graph") as HTMLCanvasElement;
const ctx = canvas.getContext("2d")!;
const banner = document.getElementById("banner")!;
const panelHost = document.getElementById("panel")!;

let view: ViewState = decodeView(window.location.hash);
let network: NetworkPayload | null = null;
let sizeValues: MetricPayload | null = null;
let colorValues: MetricPayload | null = null;
let clusters: ClusterPayload | null = null;
let scene: Scene | null = null;
let layout: ForceLayout | null = null;
let ticksLeft = 0;
let etag: string | null = null;

function showBanner(text: string | null): void {
  banner.textContent = text ?? "";
  banner.style.display = text ? "block" : "none";
}

function describe(err: unknown): string {
  if (err instanceof ApiError) return `${err.code}: ${err.message}`;
  return err instanceof Error ? err.message : String(err);
}

function syncHash(): void {
  const fragment = encodeView(view);
  if (window.location.hash.replace(/^#/, "") !== fragment) {
    window.history.replaceState(null, "", `#${fragment}`);
  }
}

function clusterSource(): { method: string; wanted: boolean } {
  if (view.colorMode === "spectral") return { method: "spectral", wanted: true };
  if (view.colorMode === "community") {
    const m = view.clusterMethod !== "none" ? view.clusterMethod : "louvain";
    return { method: m, wanted: true };
  }
  return { method: view.clusterMethod, wanted: view.clusterMethod !== "none" };
}

async function refreshData(): Promise<void> {
  try {
    network = await api.network();
    sizeValues = await api.metric(view.sizeMetric, view.sourceFilter, view.seed);
    colorValues = (CONTINUOUS_COLORS as readonly string[]).includes(view.colorMode)
      ? await api.metric(view.colorMode, view.sourceFilter, view.seed)
      : null;
    const wanted = clusterSource();
    clusters = wanted.wanted
      ? await api.clusterAssignment(wanted.method, 2, view.seed, view.sourceFilter)
      : null;
    showBanner(null);
  } catch (err) {
    network = network ?? { nodes: [], edges: [] };
    showBanner(describe(err));
  }
  restartLayout();
}

function restartLayout(): void {
  if (!network) return;
  const assignment = clusters?.assignment ?? null;
  layout = new ForceLayout(
    network.nodes.map((n) => n.id),
    network.edges.map((e) => ({ source: e.from, target: e.to })),
    {
      width: canvas.width,
      height: canvas.height,
      seed: view.seed,
      tightness: view.clusterMethod === "none" ? 0 : view.tightness,
      clusterOf:
        assignment === null ? undefined : (id) => assignment[id],
    },
  );
  ticksLeft = 300;
  requestAnimationFrame(frame);
}

function rebuildScene(): void {
  if (!network || !layout) return;
  scene = buildScene(network, {
    view,
    positions: layout.positions(),
    sizeValues: sizeValues?.values ?? null,
    colorValues: colorValues?.values ?? null,
    clusterLabels: clusters?.assignment ?? null,
    highlight: explorer.state.highlight,
  });
  drawScene(ctx, scene, canvas.width, canvas.height);
}

function frame(): void {
  if (!layout) return;
  if (ticksLeft > 0) {
    layout.run(3);
    ticksLeft -= 3;
    rebuildScene();
    requestAnimationFrame(frame);
  } else {
    rebuildScene();
  }
}

function hitTest(x: number, y: number): string | null {
  if (!scene) return null;
  for (let i = scene.nodes.length - 1; i >= 0; i--) {
    const node = scene.nodes[i];
    const dx = node.x - x;
    const dy = node.y - y;
    if (dx * dx + dy * dy <= (node.radius + 4) ** 2) return node.id;
  }
  return null;
}

function renderPanel(model: PanelModel | null): void {
  panelHost.textContent = "";
  if (!model) return;
  const heading = document.createElement("h3");
  heading.textContent = model.id;
  panelHost.appendChild(heading);

  const table = document.createElement("table");
  for (const row of model.rows) {
    const tr = document.createElement("tr");
    const th = document.createElement("th");
    th.textContent = row.label;
    const td = document.createElement("td");
    td.textContent = row.value;
    tr.append(th, td);
    table.appendChild(tr);
  }
  panelHost.appendChild(table);

  const notes = document.createElement("p");
  for (const segment of model.segments) {
    if (segment.kind === "text") {
      notes.appendChild(document.createTextNode(segment.text));
    } else {
      const link = document.createElement("a");
      link.href = "#";
      link.textContent = segment.text;
      link.addEventListener("click", (event) => {
        event.preventDefault();
        void selectNode(segment.target);
      });
      notes.appendChild(link);
    }
  }
  panelHost.appendChild(notes);

  if (model.rawRecord !== null) {
    const raw = document.createElement("pre");
    raw.textContent = model.rawRecord;
    panelHost.appendChild(raw);
  }

  const editor = document.createElement("textarea");
  editor.rows = 4;
  editor.placeholder = "New record text (saving creates a new entry id)";
  const save = document.createElement("button");
  save.textContent = "Save as new entry";
  save.addEventListener("click", () => {
    void (async () => {
      try {
        const created = await api.createNerve(editor.value);
        showBanner(null);
        await refreshData();
        await selectNode(created.id);
      } catch (err) {
        showBanner(describe(err));
      }
    })();
  });
  panelHost.append(editor, save);
}

async function selectNode(id: string | null): Promise<void> {
  view = { ...view, selected: id };
  syncHash();
  const state = await explorer.select(id, view.reverse);
  if (state.error) showBanner(state.error);
  if (id === null) {
    renderPanel(null);
    rebuildScene();
    return;
  }
  try {
    const detail = await api.nerve(id);
    renderPanel(
      buildPanelModel(detail, view.sizeMetric, sizeValues?.values[id]),
    );
  } catch (err) {
    showBanner(describe(err));
  }
  rebuildScene();
}

function wireControls(): void {
  const size = document.getElementById("size") as HTMLSelectElement;
  const color = document.getElementById("color") as HTMLSelectElement;
  const method = document.getElementById("method") as HTMLSelectElement;
  const tightness = document.getElementById("tightness") as HTMLInputElement;
  const source = document.getElementById("source") as HTMLInputElement;
  const reverse = document.getElementById("reverse") as HTMLInputElement;

  size.value = view.sizeMetric;
  color.value = view.colorMode;
  method.value = view.clusterMethod;
  tightness.value = String(view.tightness);
  source.value = view.sourceFilter ?? "";
  reverse.checked = view.reverse;

  size.addEventListener("change", () => {
    view = { ...view, sizeMetric: size.value };
    syncHash();
    void refreshData();
  });
  color.addEventListener("change", () => {
    view = { ...view, colorMode: color.value as ViewState["colorMode"] };
    syncHash();
    void refreshData();
  });
  method.addEventListener("change", () => {
    view = { ...view, clusterMethod: method.value };
    syncHash();
    void refreshData();
  });
  tightness.addEventListener("input", () => {
    view = { ...view, tightness: Number(tightness.value) };
    syncHash();
    restartLayout();
  });
  source.addEventListener("change", () => {
    view = { ...view, sourceFilter: source.value.trim() || null };
    syncHash();
    void refreshData();
  });
  reverse.addEventListener("change", () => {
    view = { ...view, reverse: reverse.checked };
    syncHash();
    if (view.selected) void selectNode(view.selected);
  });

  canvas.addEventListener("click", (event) => {
    const rect = canvas.getBoundingClientRect();
    const id = hitTest(event.clientX - rect.left, event.clientY - rect.top);
    void selectNode(id);
  });

  window.addEventListener("hashchange", () => {
    view = decodeView(window.location.hash);
    void refreshData();
  });
}

async function poll(): Promise<void> {
  try {
    const result = await api.storeChanged(etag);
    if (result.changed) await refreshData();
    etag = result.etag;
  } catch {
    // Server may be restarting; the next poll retries.
  }
  window.setTimeout(() => void poll(), 2000);
}

async function boot(): Promise<void> {
  if (!window.location.hash) {
    view = { ...DEFAULT_VIEW };
    syncHash();
  }
  wireControls();
  await refreshData();
  if (view.selected) await selectNode(view.selected);
  void poll();
}

void boot();
