/** DOM wiring: live scatter, gauge, steering, point detail, what-if overlay.
 *
 * The client is a viewer of runs created elsewhere (CLI or API): apart from
 * steering and what-if forks it only ever reads from the service.  One
 * EventSource per displayed run; the browser reconnects dropped streams by
 * itself, the server replays from the start, and the mirror resets when it
 * sees the replay wrap around, so no gap can survive a reconnect.
 */

import * as api from "./api.js";
import { ArchiveMirror } from "./archive.js";
import { parseEvent } from "./events.js";
import { Scale, rootBoxFrom } from "./scale.js";
import { classifySupported, gapBoxes } from "./supported.js";
import type { InstanceDoc, Pair } from "./types.js";
import { buildEdit } from "./whatif.js";

const FRAME = { width: 640, height: 420, margin: 36 };
const SVG_NS = "http://www.w3.org/2000/svg";

interface RunView {
  runId: string;
  mirror: ArchiveMirror;
  source: EventSource | null;
  color: string;
  label: string;
  rootPairs: Pair[];
  stale: boolean;
}

const state = {
  instance: null as InstanceDoc | null,
  parent: null as RunView | null,
  child: null as RunView | null,
  showBoxes: false,
  selected: null as Pair | null,
};

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function setText(id: string, text: string): void {
  el(id).textContent = text;
}

// --- streaming -------------------------------------------------------------

function subscribe(view: RunView, onChange: () => void): void {
  view.source?.close();
  const source = new EventSource(`/runs/${view.runId}/events`);
  view.source = source;
  const handle = (raw: MessageEvent) => {
    const event = parseEvent(String(raw.data));
    if (event === null) return;
    if (event.seq === 0 && view.mirror.lastSeq >= 0) {
      view.mirror.reset(); // server replays from the start after a reconnect
    }
    view.mirror.apply(event);
    if (
      view.rootPairs.length < 2 &&
      event.kind === "point" &&
      view.rootPairs.every(([a, b]) => a !== event.point.f1 || b !== event.point.f2)
    ) {
      view.rootPairs.push([event.point.f1, event.point.f2]);
    }
    view.stale = false;
    if (view.mirror.terminal) source.close(); // freeze the finished view
    onChange();
  };
  source.addEventListener("point", handle);
  source.addEventListener("status", handle);
  source.addEventListener("error", (raw) => {
    if (raw instanceof MessageEvent) {
      handle(raw);
      return;
    }
    if (!view.mirror.terminal) {
      view.stale = true; // connection lost: flag it, EventSource retries
      onChange();
    }
  });
}

// --- rendering ---------------------------------------------------------------

function scaleForViews(): Scale | null {
  const pairs: Pair[] = [];
  for (const view of [state.parent, state.child]) {
    if (view) pairs.push(...view.rootPairs, ...view.mirror.pairs());
  }
  const box = rootBoxFrom(
    state.parent?.rootPairs.length ? state.parent.rootPairs : pairs,
  );
  if (!box) return null;
  // widen to the union so what-if children stay visible on shifted axes
  const full = rootBoxFrom(pairs);
  if (full) {
    box.minCost = Math.min(box.minCost, full.minCost);
    box.maxCost = Math.max(box.maxCost, full.maxCost);
    box.minSat = Math.min(box.minSat, full.minSat);
    box.maxSat = Math.max(box.maxSat, full.maxSat);
  }
  return new Scale(box, FRAME);
}

function svgNode(name: string, attrs: Record<string, string>): Element {
  const node = document.createElementNS(SVG_NS, name);
  for (const [key, value] of Object.entries(attrs)) {
    node.setAttribute(key, value);
  }
  return node;
}

function renderPlot(): void {
  const svg = el<HTMLElement>("plot");
  svg.replaceChildren();
  const scale = scaleForViews();
  if (!scale) return;
  svg.appendChild(
    svgNode("line", {
      x1: String(FRAME.margin),
      y1: String(FRAME.height - FRAME.margin),
      x2: String(FRAME.width - FRAME.margin),
      y2: String(FRAME.height - FRAME.margin),
      stroke: "#888",
    }),
  );
  svg.appendChild(
    svgNode("line", {
      x1: String(FRAME.margin),
      y1: String(FRAME.margin),
      x2: String(FRAME.margin),
      y2: String(FRAME.height - FRAME.margin),
      stroke: "#888",
    }),
  );

  for (const view of [state.parent, state.child]) {
    if (!view) continue;
    const pairs = view.mirror.pairs();
    if (state.showBoxes && view === state.parent) {
      for (const gap of gapBoxes(pairs)) {
        const a = scale.position(gap.upperLeft[0], gap.upperLeft[1]);
        const b = scale.position(gap.lowerRight[0], gap.lowerRight[1]);
        svg.appendChild(
          svgNode("rect", {
            x: String(Math.min(a.x, b.x)),
            y: String(Math.min(a.y, b.y)),
            width: String(Math.abs(b.x - a.x)),
            height: String(Math.abs(b.y - a.y)),
            fill: "none",
            stroke: "#bbb",
            "stroke-dasharray": "3 3",
          }),
        );
      }
    }
    const flags = classifySupported(pairs);
    pairs.forEach((pair, index) => {
      const pos = scale.position(pair[0], pair[1]);
      const supported = flags[index] ?? true;
      const circle = svgNode("circle", {
        cx: String(pos.x),
        cy: String(pos.y),
        r: view === state.parent ? "5" : "4",
        fill: view === state.parent ? (supported ? "#1668c9" : "#e08a00") : "none",
        stroke: view === state.parent ? "none" : view.color,
        "stroke-width": "2",
        "data-run": view.label,
      }) as SVGCircleElement;
      circle.addEventListener("click", () => {
        state.selected = pair;
        renderDetail(view);
      });
      const tooltip = svgNode("title", {});
      tooltip.textContent =
        `${view.label}: satisfaction ${0 - pair[0]}, cost ${pair[1]} ` +
        `(internal f1=${pair[0]}, f2=${pair[1]})`;
      circle.appendChild(tooltip);
      svg.appendChild(circle);
    });
  }
}

function renderGauge(): void {
  for (const [view, gaugeId, labelId] of [
    [state.parent, "gauge", "gauge-label"],
    [state.child, "child-gauge", "child-gauge-label"],
  ] as const) {
    if (!view) continue;
    const fraction = view.mirror.hvFraction;
    const percent =
      fraction === null ? null : Math.round(parseFloat(fraction) * 1000) / 10;
    el<HTMLProgressElement>(gaugeId).value = percent ?? 0;
    setText(
      labelId,
      percent === null
        ? `hv ${view.mirror.hv}`
        : `hv ${view.mirror.hv} (${percent.toFixed(1)}%)`,
    );
  }
}

function renderStatus(): void {
  if (!state.parent) return;
  const stale = state.parent.stale ? " (connection lost, retrying)" : "";
  setText(
    "run-status",
    `${state.parent.label}: ${state.parent.mirror.status}${stale}, ` +
      `${state.parent.mirror.pairs().length} points, ` +
      `${state.parent.mirror.boxes} open boxes, ` +
      `${state.parent.mirror.oracleCalls} oracle calls`,
  );
  if (state.child) {
    setText(
      "child-status",
      `${state.child.label}: ${state.child.mirror.status}, ` +
        `${state.child.mirror.pairs().length} points`,
    );
  }
}

function renderDetail(view: RunView): void {
  const target = el("detail");
  if (!state.selected) {
    target.textContent = "click a point to inspect the release";
    return;
  }
  const found = view.mirror.find(state.selected[0], state.selected[1]);
  if (!found || !found.solution) {
    target.textContent = "no stored solution for this point";
    return;
  }
  const reqs = found.solution.r
    .map((bit, index) => (bit ? index + 1 : 0))
    .filter((id) => id > 0);
  const stks = found.solution.s
    .map((bit, index) => (bit ? index + 1 : 0))
    .filter((id) => id > 0);
  target.textContent =
    `satisfaction ${0 - found.f1} / cost ${found.f2}\n` +
    `requirements: ${reqs.join(", ") || "none"}\n` +
    `stakeholders satisfied: ${stks.join(", ") || "none"}`;
}

function rerender(): void {
  renderPlot();
  renderGauge();
  renderStatus();
}

// --- actions -----------------------------------------------------------------

async function refreshRuns(): Promise<void> {
  const response = await fetch("/runs");
  if (!response.ok) return;
  const runs = (await response.json()) as {
    id: string;
    algorithm: string;
    status: string;
    parent_id: string | null;
  }[];
  const select = el<HTMLSelectElement>("run-select");
  select.replaceChildren(
    ...runs
      .filter((run) => run.parent_id === null)
      .map((run) => {
        const option = document.createElement("option");
        option.value = run.id;
        option.textContent = `${run.id} ${run.algorithm} (${run.status})`;
        return option;
      }),
  );
}

async function attachRun(runId: string): Promise<void> {
  if (!runId) return;
  const handle = await api.getRun(runId);
  state.child = null;
  state.selected = null;
  state.parent = {
    runId: handle.id,
    mirror: new ArchiveMirror(),
    source: null,
    color: "#1668c9",
    label: `run ${handle.id}`,
    rootPairs: [],
    stale: false,
  };
  state.instance = await api.getInstance(handle.instance_id);
  renderEditTables();
  subscribe(state.parent, rerender);
  rerender();
}

function renderEditTables(): void {
  if (!state.instance) return;
  const costs = el("cost-table");
  costs.replaceChildren(
    ...state.instance.costs.map((cost, index) => {
      const row = document.createElement("div");
      row.innerHTML =
        `<label>r${index + 1} cost <input type="number" min="0" ` +
        `id="cost-${index + 1}" value="${cost}"></label> ` +
        `<span class="err" id="cost-${index + 1}-err"></span>`;
      return row;
    }),
  );
  const weights = el("weight-table");
  weights.replaceChildren(
    ...state.instance.weights.map((weight, index) => {
      const row = document.createElement("div");
      row.innerHTML =
        `<label>s${index + 1} weight <input type="number" min="1" ` +
        `id="weight-${index + 1}" value="${weight}"></label> ` +
        `<span class="err" id="weight-${index + 1}-err"></span>`;
      return row;
    }),
  );
}

async function steer(action: "pause" | "resume" | "stop"): Promise<void> {
  if (!state.parent) return;
  try {
    await api.control(state.parent.runId, action);
  } catch (error) {
    setText("run-status", `control failed: ${(error as Error).message}`);
  }
}

async function launchWhatIf(): Promise<void> {
  if (!state.parent || !state.instance) return;
  const costEntries = new Map<number, number>();
  state.instance.costs.forEach((_, index) => {
    const input = document.getElementById(`cost-${index + 1}`) as HTMLInputElement;
    if (input) costEntries.set(index + 1, Number(input.value));
  });
  const weightEntries = new Map<number, number>();
  state.instance.weights.forEach((_, index) => {
    const input = document.getElementById(`weight-${index + 1}`) as HTMLInputElement;
    if (input) weightEntries.set(index + 1, Number(input.value));
  });
  document.querySelectorAll(".err").forEach((node) => (node.textContent = ""));
  const { edit, errors } = buildEdit(state.instance, costEntries, weightEntries);
  if (!edit) {
    for (const error of errors) {
      const slot = document.getElementById(`${error.field}-err`);
      if (slot) slot.textContent = error.message;
    }
    return;
  }
  try {
    const child = await api.forkWhatIf(state.parent.runId, edit);
    state.child = {
      runId: child.id,
      mirror: new ArchiveMirror(),
      source: null,
      color: "#c92a2a",
      label: `what-if ${child.id}`,
      rootPairs: [],
      stale: false,
    };
    subscribe(state.child, rerender);
  } catch (error) {
    setText("child-status", `what-if rejected: ${(error as Error).message}`);
  }
}

export function wireUp(): void {
  el("refresh-btn").addEventListener("click", () => void refreshRuns());
  el("attach-btn").addEventListener("click", () => {
    const picked = el<HTMLSelectElement>("run-select").value;
    const typed = el<HTMLInputElement>("run-id-input").value.trim();
    void attachRun(typed || picked);
  });
  el("pause-btn").addEventListener("click", () => void steer("pause"));
  el("resume-btn").addEventListener("click", () => void steer("resume"));
  el("stop-btn").addEventListener("click", () => void steer("stop"));
  el("whatif-btn").addEventListener("click", () => void launchWhatIf());
  el<HTMLInputElement>("boxes-toggle").addEventListener("change", (event) => {
    state.showBoxes = (event.target as HTMLInputElement).checked;
    rerender();
  });
  void refreshRuns();
}
