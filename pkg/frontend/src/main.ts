import { Client } from "./api";
import { Store } from "./state";
import { View } from "./view";

/** Wire a store and view onto a root element. Returns the store so scripted
 * tests can drive the same instance the DOM renders from. */
export function createApp(root: HTMLElement, baseUrl = ""): Store {
  const store = new Store(new Client(baseUrl));
  new View(root, store);
  return store;
}

const rootEl = typeof document === "undefined" ? null : document.getElementById("app");
if (rootEl) createApp(rootEl);
