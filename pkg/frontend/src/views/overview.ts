/** Overview view model: what the force-directed canvas renders.
 * Node radius scales with weighted degree; above the desk-scale threshold
 * only the top-N nodes by weighted degree are kept, with a notice. */

import type { GraphPayload } from "../types.js";

export const DESK_SCALE_LIMIT = 5000;

export interface OverviewNode {
  id: number;
  label: string;
  weightedDegree: number;
  radius: number;
  betweenness?: number;
  /** 0..1 share of the maximum betweenness, for recoloring. */
  betweennessShare?: number;
}

export interface OverviewModel {
  nodes: OverviewNode[];
  links: { source: number; target: number; weight: number }[];
  truncatedTo: number | null; // non-null when the desk-scale cut applied
  showBetweenness: boolean;
}

export function radiusFor(weightedDegree: number, maxDegree: number): number {
  if (maxDegree <= 0) return 4;
  return 4 + 12 * Math.sqrt(weightedDegree / maxDegree);
}

export function buildOverviewModel(graph: GraphPayload, limit: number = DESK_SCALE_LIMIT): OverviewModel {
  let nodes = graph.nodes;
  let truncatedTo: number | null = null;
  if (nodes.length > limit) {
    nodes = [...nodes].sort((a, b) => b.weighted_degree - a.weighted_degree || a.id - b.id).slice(0, limit);
    truncatedTo = limit;
  }
  const kept = new Set(nodes.map((n) => n.id));
  const links = graph.edges
    .filter((e) => kept.has(e.u) && kept.has(e.v))
    .map((e) => ({ source: e.u, target: e.v, weight: e.weight }));

  const maxDegree = Math.max(0, ...nodes.map((n) => n.weighted_degree));
  const showBetweenness = nodes.some((n) => typeof n.betweenness === "number");
  const maxB = showBetweenness ? Math.max(...nodes.map((n) => n.betweenness ?? 0)) : 0;
  return {
    nodes: nodes.map((n) => ({
      id: n.id,
      label: n.label,
      weightedDegree: n.weighted_degree,
      radius: radiusFor(n.weighted_degree, maxDegree),
      betweenness: n.betweenness,
      betweennessShare: showBetweenness && maxB > 0 ? (n.betweenness ?? 0) / maxB : undefined,
    })),
    links,
    truncatedTo,
    showBetweenness,
  };
}

export function hoverText(node: OverviewNode): string {
  const parts = [`${node.label}`, `weighted degree ${node.weightedDegree}`];
  if (typeof node.betweenness === "number") parts.push(`betweenness ${node.betweenness}`);
  return parts.join(" · ");
}
