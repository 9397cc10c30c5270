/** Wire the console together against a service base URL. */

import { ApiClient } from './api.js';
import { SessionStore } from './sessionStore.js';
import { LibraryPanel } from './ui/libraryPanel.js';
import { PromptPanel } from './ui/promptPanel.js';
import { TracePanel } from './ui/tracePanel.js';
import { TreePanel } from './ui/treePanel.js';
import { ViewportPanel } from './ui/viewportPanel.js';

export interface ConsoleApp {
  store: SessionStore;
  promptPanel: PromptPanel;
  tracePanel: TracePanel;
  treePanel: TreePanel;
  libraryPanel: LibraryPanel;
  viewportPanel: ViewportPanel;
}

export function mountConsole(
  root: HTMLElement,
  baseUrl: string,
  doc: Document = document,
  animate = true,
): ConsoleApp {
  const store = new SessionStore(new ApiClient(baseUrl));
  const promptPanel = new PromptPanel(store, doc);
  const tracePanel = new TracePanel(store, doc);
  const treePanel = new TreePanel(store, doc);
  const libraryPanel = new LibraryPanel(store, doc);
  const viewportPanel = new ViewportPanel(store, doc, animate);

  const left = doc.createElement('div');
  left.className = 'column column-left';
  left.append(promptPanel.root, tracePanel.root);

  const center = doc.createElement('div');
  center.className = 'column column-center';
  center.append(viewportPanel.root);

  const right = doc.createElement('div');
  right.className = 'column column-right';
  right.append(treePanel.root, libraryPanel.root);

  root.append(left, center, right);
  return { store, promptPanel, tracePanel, treePanel, libraryPanel, viewportPanel };
}
