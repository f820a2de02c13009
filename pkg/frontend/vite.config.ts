import { defineConfig } from "vitest/config";

// Dev server proxies API routes to a locally running `netres serve`.
const service = "http://127.0.0.1:8008";

export default defineConfig({
  server: {
    proxy: {
      "/graphs": service,
      "/jobs": service,
      "/workspace": service,
      "/spec": service,
    },
  },
  test: {
    environment: "node",
    testTimeout: 120_000,
    hookTimeout: 120_000,
  },
});
