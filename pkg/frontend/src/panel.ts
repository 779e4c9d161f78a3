// Entry panel view model: parsed fields, notes split into plain text and
// clickable inline references, and the numbers the server reported for
// this entry. Numbers are stringified verbatim so what the page shows is
// exactly what the API returned.

import type { NerveDetail } from "./types.js";

export interface PanelRow {
  label: string;
  value: string;
}

export type NoteSegment =
  | { kind: "text"; text: string }
  | { kind: "ref"; target: string; text: string };

export interface PanelModel {
  id: string;
  rows: PanelRow[];
  segments: NoteSegment[];
  /** Record shown verbatim when the sort is unknown. */
  rawRecord: string | null;
}

const ENTRYREF = /\\entryref\{([0-9a-f]{12})\}\{([^}]*)\}/g;

/** Split note text on inline \entryref{hash}{text} references. */
export function splitEntryRefs(notes: string): NoteSegment[] {
  const segments: NoteSegment[] = [];
  let last = 0;
  ENTRYREF.lastIndex = 0;
  for (let m = ENTRYREF.exec(notes); m !== null; m = ENTRYREF.exec(notes)) {
    if (m.index > last) {
      segments.push({ kind: "text", text: notes.slice(last, m.index) });
    }
    segments.push({ kind: "ref", target: m[1]!, text: m[2]! });
    last = m.index + m[0].length;
  }
  if (last < notes.length) {
    segments.push({ kind: "text", text: notes.slice(last) });
  }
  return segments;
}

export function buildPanelModel(
  detail: NerveDetail,
  metricName: string | null,
  metricValue: number | undefined,
): PanelModel {
  const rows: PanelRow[] = [
    { label: "sort", value: detail.fields.sort },
    { label: "source", value: detail.fields.source || "(none)" },
    { label: "title", value: detail.fields.title || "(untitled)" },
    { label: "width", value: String(detail.width) },
    { label: "depth", value: String(detail.depth) },
  ];
  if (metricName !== null && metricValue !== undefined) {
    rows.push({ label: metricName, value: String(metricValue) });
  }
  return {
    id: detail.id,
    rows,
    segments: splitEntryRefs(detail.fields.notes),
    rawRecord: detail.fields.sort === "unknown" ? detail.record : null,
  };
}
