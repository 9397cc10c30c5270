/** Saved generations: list with summaries, save the latest step, reload. */

import type { SessionStore } from '../sessionStore.js';

export class LibraryPanel {
  readonly root: HTMLElement;
  private readonly status: HTMLElement;

  constructor(private readonly store: SessionStore, private readonly doc: Document = document) {
    this.root = doc.createElement('section');
    this.root.className = 'library-panel';
    this.status = doc.createElement('div');
    this.status.className = 'library-status';
    store.subscribe(() => this.render());
    this.render();
  }

  private render(): void {
    const { generations, trace } = this.store.state;
    this.root.textContent = '';
    const heading = this.doc.createElement('h3');
    heading.textContent = 'Library';
    this.root.append(heading);

    if (generations.length === 0) {
      const empty = this.doc.createElement('div');
      empty.className = 'library-empty';
      empty.textContent = 'No saved generations yet.';
      this.root.append(empty);
    }
    for (const gen of generations) {
      const row = this.doc.createElement('div');
      row.className = 'library-row';
      const summary = this.doc.createElement('span');
      summary.textContent = gen.summary;
      const reload = this.doc.createElement('button');
      reload.textContent = 'Reload';
      reload.addEventListener('click', () => {
        void this.store
          .reloadGeneration(gen.id)
          .then((status) => (this.status.textContent = `reload: ${status}`))
          .catch((err) => (this.status.textContent = String(err)));
      });
      row.append(summary, reload);
      this.root.append(row);
    }

    const lastDone = [...trace.steps].reverse().find((s) => s.status === 'Success');
    if (lastDone) {
      const saveRow = this.doc.createElement('div');
      saveRow.className = 'library-save';
      const input = this.doc.createElement('input');
      input.placeholder = 'One-sentence summary to save the last step';
      const button = this.doc.createElement('button');
      button.textContent = 'Save';
      button.addEventListener('click', () => {
        const summary = input.value.trim();
        if (!summary) {
          this.status.textContent = 'Write a one-sentence summary first.';
          return;
        }
        void this.store
          .saveGeneration(summary, lastDone.step - 1)
          .then(() => (this.status.textContent = 'saved'))
          .catch((err) => (this.status.textContent = String(err)));
      });
      saveRow.append(input, button);
      this.root.append(saveRow);
    }
    this.root.append(this.status);
  }
}
