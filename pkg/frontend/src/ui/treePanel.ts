/** Hierarchy tree mirroring the snapshot document nesting exactly. */

import { parseHierarchy, treeRows } from '../sceneDoc.js';
import type { SessionStore } from '../sessionStore.js';

export class TreePanel {
  readonly root: HTMLElement;

  constructor(private readonly store: SessionStore, private readonly doc: Document = document) {
    this.root = doc.createElement('section');
    this.root.className = 'tree-panel';
    store.subscribe(() => this.render());
    this.render();
  }

  private render(): void {
    const { snapshot, selection } = this.store.state;
    this.root.textContent = '';
    if (snapshot === null) return;
    const rows = treeRows(parseHierarchy(snapshot));
    if (rows.length === 0) {
      const empty = this.doc.createElement('div');
      empty.className = 'tree-empty';
      empty.textContent = '(empty scene)';
      this.root.append(empty);
      return;
    }
    for (const row of rows) {
      const el = this.doc.createElement('div');
      el.className = 'tree-row' + (row.name === selection ? ' selected' : '');
      el.style.paddingLeft = `${row.depth * 14}px`;
      el.dataset.name = row.name;
      el.textContent = `${row.name} [${row.shape}]${row.clickable ? ' *' : ''}`;
      el.addEventListener('click', () => this.store.select(row.name));
      this.root.append(el);
    }
  }
}
