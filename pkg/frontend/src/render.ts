// Walks a scene and issues canvas commands. The context parameter is the
// structural subset of CanvasRenderingContext2D this module touches, so
// tests can pass a recording stub instead of a real canvas.

import type { Scene, SceneEdge, SceneNode } from "./scene.js";

export interface Context2DLike {
  clearRect(x: number, y: number, w: number, h: number): void;
  beginPath(): void;
  moveTo(x: number, y: number): void;
  lineTo(x: number, y: number): void;
  quadraticCurveTo(cx: number, cy: number, x: number, y: number): void;
  arc(x: number, y: number, r: number, a0: number, a1: number): void;
  closePath(): void;
  stroke(): void;
  fill(): void;
  fillText(text: string, x: number, y: number): void;
  strokeStyle: string | CanvasGradient | CanvasPattern;
  fillStyle: string | CanvasGradient | CanvasPattern;
  lineWidth: number;
  font: string;
  textAlign: CanvasTextAlign;
}

const ARROW = 9;
const EDGE_COLOR = "#6b7280";
const LABEL_COLOR = "#374151";

function drawEdge(ctx: Context2DLike, edge: SceneEdge): void {
  ctx.strokeStyle = EDGE_COLOR;
  ctx.lineWidth = 1.4;
  ctx.beginPath();
  ctx.moveTo(edge.x1, edge.y1);
  ctx.quadraticCurveTo(edge.cx, edge.cy, edge.x2, edge.y2);
  ctx.stroke();

  // Arrowhead along the curve tangent at the target end.
  const tx = edge.x2 - edge.cx;
  const ty = edge.y2 - edge.cy;
  const len = Math.sqrt(tx * tx + ty * ty) || 1;
  const ux = tx / len;
  const uy = ty / len;
  const tipX = edge.x2;
  const tipY = edge.y2;
  ctx.fillStyle = EDGE_COLOR;
  ctx.beginPath();
  ctx.moveTo(tipX, tipY);
  ctx.lineTo(tipX - ARROW * ux - ARROW * 0.5 * uy, tipY - ARROW * uy + ARROW * 0.5 * ux);
  ctx.lineTo(tipX - ARROW * ux + ARROW * 0.5 * uy, tipY - ARROW * uy - ARROW * 0.5 * ux);
  ctx.closePath();
  ctx.fill();

  if (edge.label) {
    // Point on the quadratic at t = 0.5.
    const lx = 0.25 * edge.x1 + 0.5 * edge.cx + 0.25 * edge.x2;
    const ly = 0.25 * edge.y1 + 0.5 * edge.cy + 0.25 * edge.y2;
    ctx.fillStyle = LABEL_COLOR;
    ctx.font = "10px system-ui, sans-serif";
    ctx.textAlign = "center";
    ctx.fillText(edge.label, lx, ly - 4);
  }
}

function drawNode(ctx: Context2DLike, node: SceneNode): void {
  if (node.ring) {
    ctx.beginPath();
    ctx.arc(node.x, node.y, node.radius + 5, 0, Math.PI * 2);
    ctx.strokeStyle = node.ring;
    ctx.lineWidth = 4;
    ctx.stroke();
  }
  ctx.beginPath();
  ctx.arc(node.x, node.y, node.radius, 0, Math.PI * 2);
  ctx.fillStyle = node.fill;
  ctx.fill();
  if (node.selected) {
    ctx.strokeStyle = "#111827";
    ctx.lineWidth = 2.5;
    ctx.stroke();
  }
  ctx.fillStyle = LABEL_COLOR;
  ctx.font = "11px system-ui, sans-serif";
  ctx.textAlign = "center";
  ctx.fillText(node.label, node.x, node.y + node.radius + 12);
}

export function drawScene(
  ctx: Context2DLike,
  scene: Scene,
  width: number,
  height: number,
): void {
  ctx.clearRect(0, 0, width, height);
  for (const edge of scene.edges) drawEdge(ctx, edge);
  for (const node of scene.nodes) drawNode(ctx, node);
}
