import { defineConfig } from 'vitest/config';

export default defineConfig({
  test: {
    environment: 'node', // DOM-dependent suites opt into happy-dom per file
    include: ['tests/**/*.test.ts'],
    testTimeout: 15000,
  },
});
