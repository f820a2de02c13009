/** DOM rendering and event wiring. Re-renders wholesale on every store
 * change; the graph is SVG up to the node cap, a table beyond it. */

import { HEIGHT, WIDTH, nodeRadius } from "./layout";
import { DEMOS, PRESETS, Store, type ViewState, degrees } from "./state";
import { describe, describeStrategy } from "./steps";
import type { VerdictJson } from "./types";

const SVG_NS = "http://www.w3.org/2000/svg";

type Child = Node | string | null;

function h(tag: string, attrs: Record<string, string> = {}, ...children: Child[]): HTMLElement {
  const el = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) el.setAttribute(key, value);
  for (const child of children) {
    if (child === null) continue;
    el.append(child);
  }
  return el;
}

function badgeText(verdict: VerdictJson | null): { text: string; cls: string } {
  if (verdict === null) return { text: "–", cls: "none" };
  if (verdict.accepted === true) return { text: "accept", cls: "accept" };
  if (verdict.accepted === false) return { text: "reject", cls: "reject" };
  return { text: "indeterminate", cls: "indeterminate" };
}

function exactOr(value: number, exact: number | string | null | undefined): string {
  return exact === null || exact === undefined ? String(value) : String(exact);
}

interface MenuState {
  node: number;
  rewired: Set<string>; // "v,w" keys of incident edges chosen for the split
}

export class View {
  private menu: MenuState | null = null;
  private drag: { x0: number; y0: number; x1: number; y1: number } | null = null;

  constructor(
    private root: HTMLElement,
    private store: Store,
  ) {
    store.subscribe(() => this.render());
    this.render();
  }

  private render(): void {
    const s = this.store.state;
    this.root.textContent = "";
    this.root.append(
      this.toolbar(s),
      this.statusBar(s),
      this.graphPane(s),
      this.sidePane(s),
      this.toasts(s),
    );
  }

  // --- toolbar -------------------------------------------------------------

  private toolbar(s: ViewState): HTMLElement {
    const bar = h("header", { class: "toolbar" });

    for (const name of Object.keys(DEMOS)) {
      const btn = h("button", { id: `demo-${name}`, type: "button" }, name);
      btn.addEventListener("click", () => void this.store.loadDemo(name));
      bar.append(btn);
    }

    const file = h("input", { id: "graph-file", type: "file", accept: ".txt,.json" }) as HTMLInputElement;
    file.addEventListener("change", async () => {
      const picked = file.files?.[0];
      if (picked) await this.store.loadGraphText(await picked.text());
    });
    bar.append(file);

    const preset = h("select", { id: "preset" }) as HTMLSelectElement;
    preset.append(h("option", { value: "" }, "no preset"));
    for (const name of PRESETS) preset.append(h("option", { value: name }, name));
    preset.value = s.preset ?? "";
    preset.addEventListener("change", () => void this.store.selectPreset(preset.value || null));
    bar.append(preset);

    const seed = h("input", { id: "seed", type: "number", value: String(s.settings.seed) }) as HTMLInputElement;
    seed.addEventListener("change", () => this.store.setSeed(Number(seed.value)));
    bar.append(h("label", {}, "seed ", seed));

    const samples = h("input", { id: "samples", type: "number", value: String(s.settings.samples) }) as HTMLInputElement;
    samples.addEventListener("change", () => this.store.setSamples(Number(samples.value)));
    bar.append(h("label", {}, "samples ", samples));

    const undo = h("button", { id: "undo", type: "button" }, "undo");
    if (s.history.length === 0) undo.setAttribute("disabled", "");
    undo.addEventListener("click", () => void this.store.undo());
    bar.append(undo);

    const suggest = h("button", { id: "suggest", type: "button" }, "suggest");
    suggest.addEventListener("click", () => void this.store.suggest());
    bar.append(suggest);

    if (s.selection.length > 0) {
      const iso = h("button", { id: "isolate" }, `isolate {${s.selection.join(",")}}`);
      iso.addEventListener("click", () => void this.store.isolateSelection());
      bar.append(iso);
    }
    return bar;
  }

  // --- status line: verdict, running cost, margin --------------------------

  private statusBar(s: ViewState): HTMLElement {
    const badge = badgeText(s.verdict);
    const bar = h(
      "section",
      { class: "status" },
      h("span", { id: "verdict-badge", class: `badge ${badge.cls}` }, badge.text),
      h("span", { id: "cost" }, `cost ${s.cost === null ? "–" : s.cost}`),
      h(
        "span",
        { id: "margin" },
        `margin ${s.verdict === null ? "–" : s.verdict.margin}`,
      ),
    );
    if (s.verdict !== null) {
      bar.append(
        h(
          "span",
          { id: "q-readout" },
          `Q = ${exactOr(s.verdict.q, s.verdict.q_exact)} vs ${exactOr(s.verdict.threshold, s.verdict.threshold_exact)}`,
        ),
      );
    }
    if (s.lastPrice !== null) {
      bar.append(
        h("span", { id: "last-price" }, `${describe(s.lastPrice.step)} (price ${s.lastPrice.price})`),
      );
    }
    if (s.busy) bar.append(h("span", { id: "busy" }, "…"));
    return bar;
  }

  // --- graph pane ----------------------------------------------------------

  private graphPane(s: ViewState): HTMLElement {
    const pane = h("section", { id: "canvas" });
    if (s.graph === null) {
      pane.append(h("p", { class: "placeholder" }, "load a graph to begin"));
      return pane;
    }
    if (s.mode === "table") {
      pane.append(this.nodeTable(s));
      return pane;
    }
    pane.append(this.svg(s));
    if (this.menu !== null) pane.append(this.nodeMenu(s));
    return pane;
  }

  private svg(s: ViewState): SVGSVGElement {
    const graph = s.graph!;
    const svg = document.createElementNS(SVG_NS, "svg");
    svg.setAttribute("id", "graph-svg");
    svg.setAttribute("viewBox", `0 0 ${WIDTH} ${HEIGHT}`);
    svg.setAttribute("width", String(WIDTH));
    svg.setAttribute("height", String(HEIGHT));

    svg.addEventListener("mousedown", (ev) => {
      if (ev.target === svg) {
        this.drag = { x0: ev.clientX, y0: ev.clientY, x1: ev.clientX, y1: ev.clientY };
      }
    });
    svg.addEventListener("mousemove", (ev) => {
      if (this.drag) {
        this.drag.x1 = ev.clientX;
        this.drag.y1 = ev.clientY;
      }
    });
    svg.addEventListener("mouseup", () => {
      const rect = svg.getBoundingClientRect();
      this.finishDrag(s, rect.left, rect.top);
    });

    const deg = degrees(graph);
    const seen = new Set<string>();
    for (const [v, w] of graph.edges) {
      const key = graph.directed ? `${v},${w}` : v < w ? `${v},${w}` : `${w},${v}`;
      if (seen.has(key)) continue;
      seen.add(key);
      const a = s.positions.get(v);
      const b = s.positions.get(w);
      if (!a || !b) continue;
      const line = document.createElementNS(SVG_NS, "line");
      line.setAttribute("class", "edge");
      line.setAttribute("data-v", String(v));
      line.setAttribute("data-w", String(w));
      line.setAttribute("x1", String(a.x));
      line.setAttribute("y1", String(a.y));
      line.setAttribute("x2", String(b.x));
      line.setAttribute("y2", String(b.y));
      line.addEventListener("click", () => void this.store.deleteEdge(v, w));
      svg.append(line);
    }

    for (const v of graph.nodes) {
      const p = s.positions.get(v);
      if (!p) continue;
      const d = deg.get(v)!;
      const circle = document.createElementNS(SVG_NS, "circle");
      circle.setAttribute("class", s.selection.includes(v) ? "node selected" : "node");
      circle.setAttribute("data-node", String(v));
      circle.setAttribute("cx", String(p.x));
      circle.setAttribute("cy", String(p.y));
      circle.setAttribute("r", String(nodeRadius(d.din + d.dout)));
      circle.addEventListener("click", (ev) => {
        if (ev.shiftKey) this.store.toggleSelect(v);
      });
      circle.addEventListener("contextmenu", (ev) => {
        ev.preventDefault();
        this.menu = { node: v, rewired: new Set() };
        this.render();
      });
      svg.append(circle);
      const label = document.createElementNS(SVG_NS, "text");
      label.setAttribute("x", String(p.x));
      label.setAttribute("y", String(p.y - nodeRadius(d.din + d.dout) - 2));
      label.textContent = String(v);
      svg.append(label);
    }
    return svg;
  }

  private finishDrag(s: ViewState, left: number, topEdge: number): void {
    if (!this.drag) return;
    const { x0, y0, x1, y1 } = this.drag;
    this.drag = null;
    const [lo, hi] = [Math.min(x0, x1) - left, Math.max(x0, x1) - left];
    const [top, bottom] = [Math.min(y0, y1) - topEdge, Math.max(y0, y1) - topEdge];
    if (hi - lo < 4 && bottom - top < 4) return; // a click, not a marquee
    const picked: number[] = [];
    for (const [v, p] of s.positions) {
      if (p.x >= lo && p.x <= hi && p.y >= top && p.y <= bottom) picked.push(v);
    }
    this.store.setSelection(picked);
  }

  /** Context menu: delete / copy / split with an edge-rewire checklist. */
  private nodeMenu(s: ViewState): HTMLElement {
    const menu = this.menu!;
    const graph = s.graph!;
    const box = h("div", { id: "node-menu", "data-node": String(menu.node) });
    box.append(h("strong", {}, `node ${menu.node}`));

    const del = h("button", { class: "menu-delete" }, "delete node");
    del.addEventListener("click", () => {
      this.menu = null;
      void this.store.deleteNode(menu.node);
    });
    const copy = h("button", { class: "menu-copy" }, "copy node");
    copy.addEventListener("click", () => {
      this.menu = null;
      void this.store.copyNode(menu.node);
    });
    box.append(del, copy);

    const incident = graph.edges.filter(([v, w]) => v === menu.node || w === menu.node);
    const list = h("ul", { class: "rewire-list" });
    for (const [v, w] of incident) {
      const key = `${v},${w}`;
      const check = h("input", { type: "checkbox", "data-edge": key }) as HTMLInputElement;
      check.checked = menu.rewired.has(key);
      check.addEventListener("change", () => {
        if (check.checked) menu.rewired.add(key);
        else menu.rewired.delete(key);
      });
      list.append(h("li", {}, check, ` (${v},${w})`));
    }
    box.append(h("p", {}, "rewire to the new node:"), list);

    const split = h("button", { class: "menu-split" }, "split node");
    split.addEventListener("click", () => {
      const rewired = [...menu.rewired].map((key) => {
        const [v, w] = key.split(",").map(Number);
        return [v, w] as [number, number];
      });
      this.menu = null;
      void this.store.splitNode(menu.node, rewired);
    });
    const close = h("button", { class: "menu-close" }, "close");
    close.addEventListener("click", () => {
      this.menu = null;
      this.render();
    });
    box.append(split, close);
    return box;
  }

  private nodeTable(s: ViewState): HTMLElement {
    const graph = s.graph!;
    const deg = degrees(graph);
    const table = h("table", { id: "node-table" });
    table.append(
      h("tr", {}, h("th", {}, "node"), h("th", {}, "in"), h("th", {}, "out")),
    );
    for (const v of [...graph.nodes].sort((a, b) => a - b)) {
      const d = deg.get(v)!;
      table.append(
        h("tr", { "data-node": String(v) },
          h("td", {}, String(v)), h("td", {}, String(d.din)), h("td", {}, String(d.dout))),
      );
    }
    return table;
  }

  // --- side pane: history, suggestions, stress ------------------------------

  private sidePane(s: ViewState): HTMLElement {
    const pane = h("aside", { class: "side" });

    const history = h("ol", { id: "history" });
    for (const step of s.history) history.append(h("li", {}, describe(step)));
    pane.append(h("h3", {}, `history (${s.history.length})`), history);

    if (s.suggestNote !== null) pane.append(h("p", { id: "suggest-note" }, s.suggestNote));
    if (s.suggestions.length > 0) {
      const list = h("ol", { id: "suggestions" });
      s.suggestions.forEach((sug, index) => {
        const apply = h("button", { class: "apply-suggestion", "data-index": String(index) }, "apply");
        apply.addEventListener("click", () => void this.store.applySuggestion(index));
        list.append(
          h(
            "li",
            { "data-accepted": String(sug.accepted) },
            `${describeStrategy(sug.strategy)} — cost ${sug.cost}, margin ${sug.margin} `,
            apply,
          ),
        );
      });
      pane.append(h("h3", {}, "suggestions"), list);
    }

    pane.append(this.stressPanel(s));
    return pane;
  }

  private stressPanel(s: ViewState): HTMLElement {
    const panel = h("div", { id: "stress-panel" });
    panel.append(h("h3", {}, "stress"));

    const tau = h("input", { id: "stress-tau", type: "number", value: "1", step: "0.1" }) as HTMLInputElement;
    const gamma = h("input", { id: "stress-gamma", type: "number", value: "1", step: "0.1" }) as HTMLInputElement;
    const alpha = h("input", { id: "stress-alpha", type: "number", value: "0.5", step: "0.05" }) as HTMLInputElement;
    const lambda = h("input", { id: "stress-lambda", type: "number", value: "0.1", step: "0.05" }) as HTMLInputElement;
    const engine = h("select", { id: "stress-engine" }) as HTMLSelectElement;
    engine.append(h("option", { value: "epn" }, "epn"), h("option", { value: "gillespie" }, "gillespie"));
    const asyncBox = h("input", { id: "stress-async", type: "checkbox" }) as HTMLInputElement;

    const run = h("button", { id: "run-stress" }, "run");
    run.addEventListener("click", () =>
      void this.store.runStress({
        tau: Number(tau.value),
        gamma: Number(gamma.value),
        alpha: Number(alpha.value),
        lambda: Number(lambda.value),
        engine: engine.value as "epn" | "gillespie",
        asyncJob: asyncBox.checked,
      }),
    );
    panel.append(
      h("label", {}, "τ ", tau),
      h("label", {}, "γ ", gamma),
      h("label", {}, "α ", alpha),
      h("label", {}, "λ ", lambda),
      engine,
      h("label", {}, "async ", asyncBox),
      run,
    );

    if (s.stress !== null) {
      const badge = badgeText(s.stressVerdict);
      const est = s.stress.estimate;
      panel.append(
        h("span", { id: "stress-badge", class: `badge ${badge.cls}` }, badge.text),
        h(
          "p",
          { id: "stress-readout" },
          `p = ${est.p_hat} [${est.ci_low}, ${est.ci_high}] (${est.samples} samples, ${s.stress.engine})`,
        ),
      );
      const maxCount = Math.max(...s.stress.final_sizes.map(([, c]) => c), 1);
      const bars = h("div", { id: "histogram" });
      for (const [size, count] of s.stress.final_sizes) {
        bars.append(
          h("div", {
            class: "bar",
            "data-size": String(size),
            "data-count": String(count),
            style: `height: ${Math.round((60 * count) / maxCount)}px`,
            title: `final size ${size}: ${count}`,
          }),
        );
      }
      panel.append(bars);
    }
    return panel;
  }

  // --- toasts ---------------------------------------------------------------

  private toasts(s: ViewState): HTMLElement {
    const list = h("ul", { id: "toasts" });
    s.toasts.forEach((toast, index) => {
      const dismiss = h("button", { class: "dismiss" }, "×");
      dismiss.addEventListener("click", () => this.store.dismissToast(index));
      list.append(
        h("li", { class: "toast", "data-code": toast.code }, `${toast.code}: ${toast.message} `, dismiss),
      );
    });
    return list;
  }
}
