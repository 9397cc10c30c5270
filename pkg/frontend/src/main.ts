import { mountConsole } from './app.js';

const params = new URLSearchParams(window.location.search);
const baseUrl = params.get('api') ?? 'http://127.0.0.1:8000';
const root = document.getElementById('app');
if (root === null) throw new Error('missing #app container');

const app = mountConsole(root, baseUrl);
const planner = params.get('planner');
void app.store.start(
  params.get('config') ?? 'full LLMR',
  planner === null ? undefined : planner === 'on' || planner === 'true',
);
