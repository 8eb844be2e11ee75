// SVG renderers for the two graph modes. Both are pure functions of the
// API payloads: rendering the same response twice yields identical DOM.

import type { HistogramResponse, TraceResponse, TraceRun } from "./api";

const SVG_NS = "http://www.w3.org/2000/svg";
export const PLOT_WIDTH = 720;
export const PLOT_HEIGHT = 420;
const MARGIN = { left: 48, right: 12, top: 12, bottom: 28 };

const PALETTE = [
  "#4269d0", "#efb118", "#ff725c", "#6cc5b0", "#3ca951",
  "#ff8ab7", "#a463f2", "#97bbf5", "#9c6b4e", "#9498a0",
];

export function seriesColor(runIndex: number): string {
  return PALETTE[runIndex % PALETTE.length];
}

export function variantLabel(run: TraceRun): string {
  const parts = Object.entries(run.variant).map(
    ([name, value]) => `${name}=${value}`,
  );
  return `run ${run.index}: {${parts.join(", ")}}`;
}

/** Variables shown by default: the position-like ones when present. */
export function defaultVariables(trace: TraceResponse): string[] {
  const all = allVariables(trace);
  const positions = all.filter((name) => ["pf", "pl", "x"].includes(name));
  return positions.length > 0 ? positions : all;
}

export function allVariables(trace: TraceResponse): string[] {
  const names = new Set<string>();
  for (const run of trace.runs) {
    for (const sample of run.samples) {
      for (const name of Object.keys(sample.state)) names.add(name);
    }
  }
  return [...names].sort();
}

interface Extent {
  min: number;
  max: number;
}

function extend(extent: Extent, value: number): void {
  if (value < extent.min) extent.min = value;
  if (value > extent.max) extent.max = value;
}

function scale(extent: Extent, lo: number, hi: number) {
  const span = extent.max - extent.min || 1;
  return (value: number) => lo + ((value - extent.min) / span) * (hi - lo);
}

function svgElement(): SVGSVGElement {
  const svg = document.createElementNS(SVG_NS, "svg");
  svg.setAttribute("viewBox", `0 0 ${PLOT_WIDTH} ${PLOT_HEIGHT}`);
  svg.setAttribute("width", String(PLOT_WIDTH));
  svg.setAttribute("height", String(PLOT_HEIGHT));
  return svg;
}

function axisLabel(x: number, y: number, text: string): SVGTextElement {
  const label = document.createElementNS(SVG_NS, "text");
  label.setAttribute("x", String(x));
  label.setAttribute("y", String(y));
  label.setAttribute("class", "axis-label");
  label.textContent = text;
  return label;
}

/**
 * Trajectories mode: one polyline per (run, selected variable), the
 * overlay the config pane's variable toggles control. Failed runs
 * contribute whatever samples they produced before failing.
 */
export function renderTrajectories(
  trace: TraceResponse,
  variables: string[],
): SVGSVGElement {
  const svg = svgElement();
  const tExtent: Extent = { min: 0, max: trace.config.maxTime };
  const yExtent: Extent = { min: Infinity, max: -Infinity };
  for (const run of trace.runs) {
    for (const sample of run.samples) {
      for (const name of variables) {
        const value = sample.state[name];
        if (value !== undefined) extend(yExtent, value);
      }
    }
  }
  if (yExtent.min > yExtent.max) {
    yExtent.min = 0;
    yExtent.max = 1;
  }
  const sx = scale(tExtent, MARGIN.left, PLOT_WIDTH - MARGIN.right);
  const sy = scale(yExtent, PLOT_HEIGHT - MARGIN.bottom, MARGIN.top);

  for (const run of trace.runs) {
    for (const name of variables) {
      const points = run.samples
        .filter((s) => s.state[name] !== undefined)
        .map((s) => `${sx(s.t).toFixed(2)},${sy(s.state[name]).toFixed(2)}`)
        .join(" ");
      if (!points) continue;
      const line = document.createElementNS(SVG_NS, "polyline");
      line.setAttribute("class", "series");
      line.setAttribute("data-run", String(run.index));
      line.setAttribute("data-var", name);
      line.setAttribute("points", points);
      line.setAttribute("fill", "none");
      line.setAttribute("stroke", seriesColor(run.index));
      svg.appendChild(line);
    }
  }
  svg.appendChild(
    axisLabel(PLOT_WIDTH - MARGIN.right, PLOT_HEIGHT - 8, "t"),
  );
  svg.appendChild(axisLabel(8, MARGIN.top + 8, variables.join(", ")));
  return svg;
}

/**
 * Histogram mode: one bar per bin (height = count) plus a step line at
 * each bin's total, the reference for how many runs were alive.
 */
export function renderHistogram(hist: HistogramResponse): SVGSVGElement {
  const svg = svgElement();
  const peak = Math.max(1, ...hist.bins.map((b) => b.total));
  const innerWidth = PLOT_WIDTH - MARGIN.left - MARGIN.right;
  const slot = hist.bins.length > 0 ? innerWidth / hist.bins.length : 0;
  const baseline = PLOT_HEIGHT - MARGIN.bottom;
  const sy = scale(
    { min: 0, max: peak },
    baseline,
    MARGIN.top,
  );

  hist.bins.forEach((bin, i) => {
    const bar = document.createElementNS(SVG_NS, "rect");
    bar.setAttribute("class", "bar");
    bar.setAttribute("data-t", String(bin.t));
    bar.setAttribute("data-count", String(bin.count));
    bar.setAttribute("x", (MARGIN.left + i * slot + 1).toFixed(2));
    bar.setAttribute("y", sy(bin.count).toFixed(2));
    bar.setAttribute("width", Math.max(1, slot - 2).toFixed(2));
    bar.setAttribute("height", (baseline - sy(bin.count)).toFixed(2));
    svg.appendChild(bar);
  });

  if (hist.bins.length > 0) {
    const steps = hist.bins
      .map((bin, i) => {
        const x0 = (MARGIN.left + i * slot).toFixed(2);
        const x1 = (MARGIN.left + (i + 1) * slot).toFixed(2);
        const y = sy(bin.total).toFixed(2);
        return `${i === 0 ? "M" : "L"}${x0},${y} L${x1},${y}`;
      })
      .join(" ");
    const total = document.createElementNS(SVG_NS, "path");
    total.setAttribute("class", "total-line");
    total.setAttribute("d", steps);
    total.setAttribute("fill", "none");
    svg.appendChild(total);
  }
  svg.appendChild(
    axisLabel(PLOT_WIDTH - MARGIN.right, PLOT_HEIGHT - 8, "t"),
  );
  svg.appendChild(axisLabel(8, MARGIN.top + 8, hist.query.predicate));
  return svg;
}

/** Legend entries, one per run; hovering one dims the other series. */
export function renderLegend(
  trace: TraceResponse,
  svg: SVGSVGElement,
): HTMLElement {
  const legend = document.createElement("ul");
  legend.className = "legend";
  for (const run of trace.runs) {
    const item = document.createElement("li");
    item.dataset.run = String(run.index);
    const swatch = document.createElement("span");
    swatch.className = "swatch";
    swatch.style.background = seriesColor(run.index);
    item.appendChild(swatch);
    item.appendChild(document.createTextNode(variantLabel(run)));
    if (run.status !== "completed") {
      item.appendChild(document.createTextNode(` [${run.status}]`));
    }
    item.addEventListener("mouseenter", () => highlightRun(svg, run.index));
    item.addEventListener("mouseleave", () => highlightRun(svg, null));
    legend.appendChild(item);
  }
  return legend;
}

export function highlightRun(svg: SVGSVGElement, run: number | null): void {
  for (const series of svg.querySelectorAll<SVGElement>(".series")) {
    const dimmed = run !== null && series.dataset.run !== String(run);
    series.classList.toggle("dimmed", dimmed);
  }
}

/** The message shown instead of a plot when every run failed. */
export function renderEmptyState(trace: TraceResponse): HTMLElement {
  const box = document.createElement("div");
  box.className = "empty-state";
  const heading = document.createElement("p");
  heading.textContent = "All runs failed; nothing to plot.";
  box.appendChild(heading);
  const list = document.createElement("ul");
  for (const run of trace.runs) {
    const item = document.createElement("li");
    item.dataset.run = String(run.index);
    item.textContent = `${variantLabel(run)}: ${run.error ?? "failed"}`;
    list.appendChild(item);
  }
  box.appendChild(list);
  return box;
}

export function allRunsFailed(trace: TraceResponse): boolean {
  return trace.runs.length > 0 &&
    trace.runs.every((run) => run.status === "failed");
}
