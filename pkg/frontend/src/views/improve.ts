/** Improve view model: the edits table ("how the weight varied, how much
 * budget was invested"), per-opponent percentage changes, and the set of
 * edited edges to highlight in the layout. Every cell is a response field. */

import type { JobRecord, SolutionPayload } from "../types.js";

export interface EditTableRow {
  label: string;
  node: number;
  weightBefore: number;
  weightAfter: number;
  increment: number;
}

export interface OpponentTableRow {
  label: string;
  before: number;
  after: number;
  pctText: string; // "+3.20%" / "-70.00%" / "n/a"
}

export interface ImproveResultModel {
  kind: "solution";
  targetLabel: string;
  before: number;
  after: number;
  budget: number;
  cost: number;
  budgetText: string; // e.g. "2/2"
  reason: string;
  empty: boolean;
  edits: EditTableRow[];
  opponents: OpponentTableRow[];
  highlightEdges: { target: number; node: number }[];
}

export function pctText(pct: number | null): string {
  if (pct === null) return "n/a";
  return `${pct >= 0 ? "+" : ""}${pct.toFixed(2)}%`;
}

export function buildResultModel(payload: SolutionPayload): ImproveResultModel {
  return {
    kind: "solution",
    targetLabel: payload.target_label,
    before: payload.target_before,
    after: payload.target_after,
    budget: payload.budget,
    cost: payload.cost,
    budgetText: `${payload.cost}/${payload.budget}`,
    reason: payload.terminated_reason,
    empty: payload.edits.length === 0,
    edits: payload.edits.map((e) => ({
      label: e.label,
      node: e.node,
      weightBefore: e.weight_before,
      weightAfter: e.weight_after,
      increment: e.increment,
    })),
    opponents: payload.opponents.map((o) => ({
      label: o.label,
      before: o.before,
      after: o.after,
      pctText: pctText(o.pct_change),
    })),
    highlightEdges: payload.edits.map((e) => ({ target: payload.target, node: e.node })),
  };
}

export interface ProgressModel {
  status: string;
  percentText: string;
  iteration: number;
  cancellable: boolean;
}

export function buildProgressModel(record: JobRecord): ProgressModel {
  return {
    status: record.status,
    percentText: `${Math.round(record.progress * 100)}%`,
    iteration: record.current_iteration,
    cancellable: record.status === "QUEUED" || record.status === "RUNNING",
  };
}
