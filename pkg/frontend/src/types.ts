/** Response payload shapes of the netboost HTTP API (field names verbatim). */

export interface NetworkSummary {
  network_id: string;
  n_nodes: number;
  n_edges: number;
}

export interface GraphNode {
  id: number;
  label: string;
  weighted_degree: number;
  betweenness?: number;
}

export interface GraphEdge {
  u: number;
  v: number;
  weight: number;
}

export interface GraphPayload {
  n_nodes: number;
  n_edges: number;
  nodes: GraphNode[];
  edges: GraphEdge[];
}

export interface EditRow {
  node: number;
  label: string;
  increment: number;
  weight_before: number;
  weight_after: number;
}

export interface OpponentRow {
  node: number;
  label: string;
  before: number;
  after: number;
  pct_change: number | null;
}

export interface SolutionPayload {
  type: "solution";
  target: number;
  target_label: string;
  budget: number;
  cost: number;
  target_before: number;
  target_after: number;
  edits: EditRow[];
  opponents: OpponentRow[];
  iterations: { node: number; label: string; increment: number; b_v: number; candidates_evaluated: number }[];
  terminated_reason: string;
}

export interface SweepPayload {
  type: "sweep";
  budgets: number[];
  frequency_table: { label: string; count: number }[];
}

export type JobStatus = "QUEUED" | "RUNNING" | "DONE" | "FAILED" | "CANCELLED";

export interface JobRecord {
  id: string;
  network_id: string;
  kind: "solve" | "sweep";
  status: JobStatus;
  progress: number;
  current_iteration: number;
  result?: SolutionPayload | SweepPayload;
  error?: { code: string; message: string };
}

export interface PathStep {
  id: number;
  label: string;
}

export interface PathSetPayload {
  source: number;
  source_label: string;
  sink: number;
  sink_label: string;
  distance: number | null;
  reachable: boolean;
  num_shortest: number;
  paths: PathStep[][];
  truncated: boolean;
}

export interface PathsResponse {
  before: PathSetPayload;
  after?: PathSetPayload;
}

export interface WhatIfPayload {
  a: number;
  a_label: string;
  b: number;
  b_label: string;
  old_weight: number;
  new_weight: number;
  b_a_before: number;
  b_a_after: number;
  b_b_before: number;
  b_b_after: number;
}

export interface ApiErrorBody {
  code: string;
  message: string;
}
