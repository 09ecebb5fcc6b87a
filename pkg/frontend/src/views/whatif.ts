/** Connectivity Test view model: the current weight of the edge between
 * two nodes (zero when there is no direct connection) and both nodes'
 * betweenness before/after the proposed weight. */

import type { WhatIfPayload } from "../types.js";

export interface WhatIfRowModel {
  label: string;
  before: number;
  after: number;
  delta: number;
}

export interface WhatIfModel {
  edgeText: string; // "l1 -- l2"
  oldWeight: number;
  newWeight: number;
  removed: boolean;
  rows: [WhatIfRowModel, WhatIfRowModel];
}

export function buildWhatIfModel(payload: WhatIfPayload): WhatIfModel {
  return {
    edgeText: `${payload.a_label} -- ${payload.b_label}`,
    oldWeight: payload.old_weight,
    newWeight: payload.new_weight,
    removed: payload.new_weight === 0,
    rows: [
      {
        label: payload.a_label,
        before: payload.b_a_before,
        after: payload.b_a_after,
        delta: payload.b_a_after - payload.b_a_before,
      },
      {
        label: payload.b_label,
        before: payload.b_b_before,
        after: payload.b_b_after,
        delta: payload.b_b_after - payload.b_b_before,
      },
    ],
  };
}
