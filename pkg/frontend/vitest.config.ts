import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    include: ["tests/**/*.test.ts"],
    testTimeout: 60_000,
    hookTimeout: 60_000,
    // DOM-dependent test files opt into happy-dom via @vitest-environment
    environment: "node",
  },
});
