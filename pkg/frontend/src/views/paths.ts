/** Shortest Paths view model: all shortest paths before and, when a DONE
 * solve job is selected, after its edits. */

import type { PathsResponse, PathSetPayload } from "../types.js";

export interface PathListModel {
  heading: string; // "before" | "after"
  reachable: boolean;
  distanceText: string; // "UNREACHABLE" or the distance
  numShortest: number;
  truncated: boolean;
  routes: string[]; // "l1 -> v -> l2"
}

export function buildPathList(heading: string, ps: PathSetPayload): PathListModel {
  return {
    heading,
    reachable: ps.reachable,
    distanceText: ps.reachable ? String(ps.distance) : "UNREACHABLE",
    numShortest: ps.num_shortest,
    truncated: ps.truncated,
    routes: ps.paths.map((p) => p.map((step) => step.label).join(" -> ")),
  };
}

export function buildPathsModel(res: PathsResponse): PathListModel[] {
  const out = [buildPathList("before", res.before)];
  if (res.after) out.push(buildPathList("after", res.after));
  return out;
}
