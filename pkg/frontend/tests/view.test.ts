// @vitest-environment jsdom

import { beforeEach, describe as group, expect, test } from "vitest";

import { Store } from "../src/state";
import { View } from "../src/view";
import type { GraphPayload } from "../src/types";
import { FakeClient, SUGGESTIONS, flush, star4, verdict } from "./helpers";

let root: HTMLElement;

beforeEach(() => {
  document.body.innerHTML = "";
  root = document.createElement("div");
  document.body.append(root);
});

function mount(client: FakeClient): Store {
  const store = new Store(client.asClient());
  new View(root, store);
  return store;
}

const $ = <T extends Element>(sel: string): T => {
  const el = root.querySelector(sel);
  if (!el) throw new Error(`missing element ${sel}`);
  return el as T;
};

const text = (sel: string): string => $(sel).textContent ?? "";

group("rendering", () => {
  test("starts empty with a neutral badge and no cost", () => {
    mount(new FakeClient());
    expect(text("#verdict-badge")).toBe("–");
    expect(text("#cost")).toBe("cost –");
    expect(text("#margin")).toBe("margin –");
    expect(root.querySelector("#graph-svg")).toBeNull();
  });

  test("draws one line per edge and one sized circle per node", async () => {
    const store = mount(new FakeClient());
    await store.loadDemo("star-4");

    expect(root.querySelectorAll("line.edge").length).toBe(3);
    expect(root.querySelectorAll("circle.node").length).toBe(4);

    // the hub has degree 3, satellites degree 1; radii reflect that
    const hub = $(`circle[data-node="0"]`);
    const leaf = $(`circle[data-node="1"]`);
    expect(Number(hub.getAttribute("r"))).toBeGreaterThan(Number(leaf.getAttribute("r")));
  });

  test("shows the verdict, cost and margin straight from the service", async () => {
    const client = new FakeClient();
    client.onCost = async () => ({ cost: 7.25 });
    client.onEvaluate = async () =>
      verdict(false, { q: 42.125, q_exact: "337/8", threshold: 1.375, margin: -40.75 });
    const store = mount(client);

    await store.loadDemo("star-4");
    await store.selectPreset("prop-6.1-out2");

    const badge = $("#verdict-badge");
    expect(badge.textContent).toBe("reject");
    expect(badge.className).toContain("reject");
    expect(text("#cost")).toBe("cost 7.25");
    expect(text("#margin")).toBe("margin -40.75");
    expect(text("#q-readout")).toBe("Q = 337/8 vs 11/8");
  });

  test("maps the three verdict values onto the three badge states", async () => {
    const client = new FakeClient();
    const store = mount(client);
    await store.loadDemo("star-4");

    client.onEvaluate = async () => verdict(true);
    await store.selectPreset("prop-6.1-out2");
    expect(text("#verdict-badge")).toBe("accept");

    client.onEvaluate = async () => verdict(null);
    await store.selectPreset("stress-sir");
    expect(text("#verdict-badge")).toBe("indeterminate");
    expect($("#verdict-badge").className).toContain("indeterminate");
  });

  test("falls back to a degree table past the node cap", async () => {
    const client = new FakeClient();
    const big: GraphPayload = {
      id: "g9",
      graph: {
        directed: true,
        nodes: [...Array(501).keys()],
        edges: [[0, 1], [2, 1]],
      },
      text: "",
      hash: "hash-big",
      history: [],
      nodes: 501,
      edges: 2,
    };
    client.onCreateGraph = async () => big;
    const store = mount(client);

    await store.loadGraphText("whatever");

    expect(root.querySelector("#graph-svg")).toBeNull();
    const rows = root.querySelectorAll("#node-table tr[data-node]");
    expect(rows.length).toBe(501);
    expect($(`tr[data-node="1"]`).textContent).toBe("120"); // node 1: in 2, out 0
  });

  test("renders the history as the service's step descriptions", async () => {
    const client = new FakeClient();
    client.onApply = async (_gid, step) =>
      star4({
        history: [
          { kind: "edge_del", v: 0, w: 1 },
          step,
        ],
      });
    const store = mount(client);
    await store.loadDemo("star-4");
    await store.deleteNode(3);

    const items = [...root.querySelectorAll("#history li")].map((li) => li.textContent);
    expect(items).toEqual(["edge_del 0 1", "node_del 3"]);
  });
});

group("edge and node interactions", () => {
  test("clicking an edge deletes it and shows its price", async () => {
    const client = new FakeClient();
    const store = mount(client);
    await store.loadDemo("star-4");
    const costs = [5.5, 1];
    client.onCost = async () => ({ cost: costs.shift() ?? 1 });

    $(`line.edge[data-v="0"][data-w="2"]`).dispatchEvent(new MouseEvent("click"));
    await flush();

    expect(client.called("apply")[0].args[1]).toEqual({ kind: "edge_del", v: 0, w: 2 });
    expect(text("#last-price")).toBe("edge_del 0 2 (price 5.5)");
    expect(store.state.busy).toBe(false);
  });

  test("shift-click selects nodes and the isolate button sends the set", async () => {
    const client = new FakeClient();
    const store = mount(client);
    await store.loadDemo("star-4");
    expect(root.querySelector("#isolate")).toBeNull();

    $(`circle[data-node="2"]`).dispatchEvent(new MouseEvent("click", { shiftKey: true }));
    $(`circle[data-node="1"]`).dispatchEvent(new MouseEvent("click", { shiftKey: true }));

    const iso = $<HTMLButtonElement>("#isolate");
    expect(iso.textContent).toBe("isolate {1,2}");
    iso.click();
    await flush();

    expect(client.called("apply")[0].args[1]).toEqual({ kind: "isolate", within: [1, 2] });
    expect(store.state.selection).toEqual([]);
  });

  test("a marquee drag selects every node inside the rectangle", async () => {
    const store = mount(new FakeClient());
    await store.loadDemo("star-4");

    const svg = $("#graph-svg");
    svg.dispatchEvent(new MouseEvent("mousedown", { clientX: 0, clientY: 0 }));
    svg.dispatchEvent(new MouseEvent("mousemove", { clientX: 720, clientY: 480 }));
    svg.dispatchEvent(new MouseEvent("mouseup"));

    expect(store.state.selection).toEqual([0, 1, 2, 3]);
    expect($("#isolate").textContent).toBe("isolate {0,1,2,3}");
  });

  test("the node menu drives copy, delete and split with chosen rewires", async () => {
    const client = new FakeClient();
    const store = mount(client);
    await store.loadDemo("star-4");

    $(`circle[data-node="0"]`).dispatchEvent(
      new MouseEvent("contextmenu", { bubbles: true, cancelable: true }),
    );
    const menu = $("#node-menu");
    expect(menu.getAttribute("data-node")).toBe("0");
    expect(menu.querySelectorAll("input[data-edge]").length).toBe(3);

    $<HTMLInputElement>(`input[data-edge="0,1"]`).click();
    $<HTMLInputElement>(`input[data-edge="0,3"]`).click();
    $<HTMLButtonElement>(".menu-split").click();
    await flush();

    expect(client.called("apply")[0].args[1]).toEqual({
      kind: "node_split",
      v: 0,
      new: 4,
      edges: [[0, 1], [0, 3]],
    });
    expect(root.querySelector("#node-menu")).toBeNull();
  });

  test("menu copy and delete map to their steps", async () => {
    const client = new FakeClient();
    const store = mount(client);
    await store.loadDemo("star-4");

    $(`circle[data-node="3"]`).dispatchEvent(
      new MouseEvent("contextmenu", { bubbles: true, cancelable: true }),
    );
    $<HTMLButtonElement>(".menu-copy").click();
    await flush();
    expect(client.called("apply")[0].args[1]).toEqual({ kind: "node_copy", v: 3, new: 4 });

    $(`circle[data-node="3"]`).dispatchEvent(
      new MouseEvent("contextmenu", { bubbles: true, cancelable: true }),
    );
    $<HTMLButtonElement>(".menu-delete").click();
    await flush();
    expect(client.called("apply")[1].args[1]).toEqual({ kind: "node_del", v: 3 });
  });
});

group("panels", () => {
  test("suggestions render ranked strategies and apply on click", async () => {
    const client = new FakeClient();
    const store = mount(client);
    await store.loadDemo("star-4");
    await store.selectPreset("prop-6.2-maxoutdeg");
    await store.suggest();

    const items = root.querySelectorAll("#suggestions li");
    expect(items.length).toBe(2);
    expect(items[0].textContent).toContain("edge_del 0 1; edge_del 0 2 — cost 2.5, margin 0.125");
    expect(items[1].textContent).toContain("isolate {0,1} — cost 9.75, margin -1.5");
    expect(text("#suggest-note")).toBe(SUGGESTIONS.note);
    client.calls = [];

    $<HTMLButtonElement>(`.apply-suggestion[data-index="0"]`).click();
    await flush();

    expect(client.called("apply").map((c) => c.args[1])).toEqual(SUGGESTIONS.suggestions[0].strategy);
    expect(root.querySelector("#suggestions")).toBeNull();
  });

  test("the stress panel shows the estimate, badge and histogram from the run", async () => {
    const client = new FakeClient();
    client.onEvaluate = async () => verdict(null);
    const store = mount(client);
    await store.loadDemo("star-4");
    expect(root.querySelector("#stress-badge")).toBeNull();

    $<HTMLButtonElement>("#run-stress").click();
    await flush();

    expect(text("#stress-badge")).toBe("indeterminate");
    expect(text("#stress-readout")).toBe("p = 0.123 [0.101, 0.149] (2000 samples, epn)");
    const bars = [...root.querySelectorAll("#histogram .bar")];
    expect(bars.map((b) => b.getAttribute("data-size"))).toEqual(["1", "2", "4"]);
    expect(bars.map((b) => b.getAttribute("data-count"))).toEqual(["1500", "300", "200"]);

    const [, body] = client.called("stress")[0].args as [string, { config: { tau: number } }];
    expect(body.config.tau).toBe(1); // panel defaults flow into the request
  });
});

group("toasts", () => {
  test("each toast shows its machine-readable code and can be dismissed", () => {
    const store = mount(new FakeClient());
    store.pushToast("bad_config", "lambda must be positive");
    store.pushToast("not_found", "no graph 'g9'");

    const toasts = root.querySelectorAll(".toast");
    expect(toasts.length).toBe(2);
    expect(toasts[0].getAttribute("data-code")).toBe("bad_config");
    expect(toasts[0].textContent).toContain("bad_config: lambda must be positive");

    $<HTMLButtonElement>(".toast .dismiss").click();
    expect(root.querySelectorAll(".toast").length).toBe(1);
    expect($(".toast").getAttribute("data-code")).toBe("not_found");
  });

  test("the undo button is disabled while there is nothing to undo", async () => {
    const store = mount(new FakeClient());
    await store.loadDemo("star-4");
    expect($("#undo").hasAttribute("disabled")).toBe(true);

    await store.deleteEdge(0, 1); // fake apply returns a one-step history
    expect($("#undo").hasAttribute("disabled")).toBe(false);
  });
});
