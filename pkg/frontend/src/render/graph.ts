/** Force-directed node-link rendering (d3): zoomable, hover details,
 * optional betweenness recoloring, and highlighting of edited edges. */

import * as d3 from "d3";

import type { OverviewModel, OverviewNode } from "../views/overview.js";
import { hoverText } from "../views/overview.js";

interface SimNode extends d3.SimulationNodeDatum {
  id: number;
  model: OverviewNode;
}

interface SimLink extends d3.SimulationLinkDatum<SimNode> {
  weight: number;
  u: number;
  v: number;
}

export class GraphRenderer {
  private svg: d3.Selection<SVGSVGElement, unknown, null, undefined>;
  private zoomLayer: d3.Selection<SVGGElement, unknown, null, undefined>;
  private simulation: d3.Simulation<SimNode, SimLink> | null = null;
  private linkSel: d3.Selection<SVGLineElement, SimLink, SVGGElement, unknown> | null = null;
  private highlighted = new Set<string>();

  constructor(container: HTMLElement, private width = 900, private height = 600) {
    this.svg = d3
      .select(container)
      .append("svg")
      .attr("viewBox", `0 0 ${this.width} ${this.height}`)
      .attr("class", "graph-canvas");
    this.zoomLayer = this.svg.append("g");
    this.svg.call(
      d3
        .zoom<SVGSVGElement, unknown>()
        .scaleExtent([0.1, 12])
        .on("zoom", (event) => this.zoomLayer.attr("transform", event.transform)),
    );
  }

  render(model: OverviewModel): void {
    this.zoomLayer.selectAll("*").remove();
    this.simulation?.stop();
    if (model.nodes.length === 0) {
      this.linkSel = null;
      return;
    }

    const nodes: SimNode[] = model.nodes.map((n) => ({ id: n.id, model: n }));
    const links: SimLink[] = model.links.map((l) => ({
      source: l.source,
      target: l.target,
      weight: l.weight,
      u: l.source,
      v: l.target,
    }));

    const color = (n: OverviewNode): string => {
      if (model.showBetweenness && n.betweennessShare !== undefined) {
        return d3.interpolateYlOrRd(0.15 + 0.85 * n.betweennessShare);
      }
      return "#4c78a8";
    };

    const linkSel = this.zoomLayer
      .append("g")
      .selectAll<SVGLineElement, SimLink>("line")
      .data(links)
      .join("line")
      .attr("stroke", (l) => (this.isHighlighted(l.u, l.v) ? "#d62728" : "#bbb"))
      .attr("stroke-width", (l) => (this.isHighlighted(l.u, l.v) ? 3 : 1 + Math.sqrt(l.weight) / 2));
    this.linkSel = linkSel;

    const nodeSel = this.zoomLayer
      .append("g")
      .selectAll<SVGCircleElement, SimNode>("circle")
      .data(nodes)
      .join("circle")
      .attr("r", (n) => n.model.radius)
      .attr("fill", (n) => color(n.model))
      .attr("stroke", "#fff");
    nodeSel.append("title").text((n) => hoverText(n.model));

    const labelSel = this.zoomLayer
      .append("g")
      .selectAll<SVGTextElement, SimNode>("text")
      .data(nodes)
      .join("text")
      .attr("font-size", 10)
      .attr("dx", 8)
      .attr("dy", 3)
      .text((n) => n.model.label);

    this.simulation = d3
      .forceSimulation(nodes)
      .force(
        "link",
        d3
          .forceLink<SimNode, SimLink>(links)
          .id((n) => n.id)
          .distance((l) => 40 / Math.sqrt(l.weight)),
      )
      .force("charge", d3.forceManyBody().strength(-80))
      .force("center", d3.forceCenter(this.width / 2, this.height / 2))
      .on("tick", () => {
        linkSel
          .attr("x1", (l) => (l.source as SimNode).x ?? 0)
          .attr("y1", (l) => (l.source as SimNode).y ?? 0)
          .attr("x2", (l) => (l.target as SimNode).x ?? 0)
          .attr("y2", (l) => (l.target as SimNode).y ?? 0);
        nodeSel.attr("cx", (n) => n.x ?? 0).attr("cy", (n) => n.y ?? 0);
        labelSel.attr("x", (n) => n.x ?? 0).attr("y", (n) => n.y ?? 0);
      });
  }

  /** Mark solver-edited edges; re-colors without restarting the layout. */
  highlightEdges(pairs: { target: number; node: number }[]): void {
    this.highlighted = new Set(pairs.map((p) => keyOf(p.target, p.node)));
    this.linkSel
      ?.attr("stroke", (l) => (this.isHighlighted(l.u, l.v) ? "#d62728" : "#bbb"))
      .attr("stroke-width", (l) => (this.isHighlighted(l.u, l.v) ? 3 : 1 + Math.sqrt(l.weight) / 2));
  }

  private isHighlighted(u: number, v: number): boolean {
    return this.highlighted.has(keyOf(u, v));
  }
}

function keyOf(u: number, v: number): string {
  return u < v ? `${u}-${v}` : `${v}-${u}`;
}
