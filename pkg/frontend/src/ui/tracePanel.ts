/** Per-step trace cards: instruction, summary, attempts with verdicts and
 * suggestions, outcome, duration. Renders only what the events said. */

import type { SessionStore } from '../sessionStore.js';
import type { StepCard } from '../traceStore.js';

export class TracePanel {
  readonly root: HTMLElement;

  constructor(private readonly store: SessionStore, private readonly doc: Document = document) {
    this.root = doc.createElement('section');
    this.root.className = 'trace-panel';
    store.subscribe(() => this.render());
    this.render();
  }

  private render(): void {
    const { trace } = this.store.state;
    this.root.textContent = '';
    if (trace.plan.length > 0) {
      const plan = this.doc.createElement('ol');
      plan.className = 'plan';
      for (const step of trace.plan) {
        const li = this.doc.createElement('li');
        li.textContent = step;
        plan.append(li);
      }
      this.root.append(plan);
    }
    for (const step of trace.steps) this.root.append(this.card(step));
    for (const message of trace.errors) {
      const err = this.doc.createElement('div');
      err.className = 'trace-error';
      err.textContent = message;
      this.root.append(err);
    }
  }

  private card(step: StepCard): HTMLElement {
    const card = this.doc.createElement('article');
    card.className = `step-card status-${(step.status ?? 'running').toLowerCase()}`;

    const header = this.doc.createElement('header');
    header.textContent = `step ${step.step}: ${step.instruction ?? '...'}`;
    card.append(header);

    if (step.summary) {
      const summary = this.doc.createElement('p');
      summary.className = 'summary';
      summary.textContent = step.summary;
      card.append(summary);
    }
    if (step.skills.length > 0) {
      const skills = this.doc.createElement('p');
      skills.className = 'skills';
      skills.textContent = `skills: ${step.skills.join(', ')}`;
      card.append(skills);
    }
    for (const attempt of step.attempts) {
      const box = this.doc.createElement('div');
      box.className = `attempt verdict-${attempt.verdict ?? 'none'}`;
      const label = this.doc.createElement('div');
      label.className = 'attempt-label';
      label.textContent =
        `attempt ${attempt.attempt + 1}` +
        (attempt.verdict ? ` - ${attempt.verdict.toUpperCase()}` : '') +
        (attempt.source ? ` (${attempt.source})` : '');
      box.append(label);
      if (attempt.code !== null) {
        const code = this.doc.createElement('pre');
        code.textContent = attempt.code;
        box.append(code);
      }
      if (attempt.error) {
        const err = this.doc.createElement('div');
        err.className = 'attempt-error';
        err.textContent = attempt.error;
        box.append(err);
      }
      if (attempt.suggestion) {
        const hint = this.doc.createElement('div');
        hint.className = 'suggestion';
        hint.textContent = attempt.suggestion;
        box.append(hint);
      }
      card.append(box);
    }
    if (step.status !== undefined) {
      const footer = this.doc.createElement('footer');
      const seconds = step.duration === undefined ? '' : ` in ${step.duration.toFixed(2)}s`;
      footer.textContent = `${step.status}${seconds}${step.unverified ? ' (unverified)' : ''}`;
      card.append(footer);
      for (const message of step.executeErrors) {
        const err = this.doc.createElement('div');
        err.className = 'execute-error';
        err.textContent = message;
        card.append(err);
      }
    }
    return card;
  }
}
