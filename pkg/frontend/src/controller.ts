// Selection and what-if propagation. Selecting a node asks the server
// which atoms a change there could reach and keeps the hop distances for
// shading; deselecting clears the highlight. All reachability answers
// come from the API, never from walking the graph locally.

import { Api, ApiError } from "./api.js";

export interface SelectionState {
  selected: string | null;
  /** Affected node id -> hop distance; null when nothing is selected. */
  highlight: Record<string, number> | null;
  error: string | null;
}

const CLEARED: SelectionState = { selected: null, highlight: null, error: null };

export class Explorer {
  state: SelectionState = CLEARED;

  constructor(private readonly api: Api) {}

  async select(id: string | null, reverse: boolean): Promise<SelectionState> {
    if (id === null) {
      this.state = CLEARED;
      return this.state;
    }
    try {
      const result = await this.api.propagate(id, reverse);
      const hops: Record<string, number> = {};
      for (const affectedId of result.affected) {
        hops[affectedId] = result.hop_distance[affectedId] ?? 1;
      }
      this.state = { selected: id, highlight: hops, error: null };
    } catch (err) {
      const text =
        err instanceof ApiError ? `${err.code}: ${err.message}` : String(err);
      this.state = { selected: id, highlight: null, error: text };
    }
    return this.state;
  }
}
