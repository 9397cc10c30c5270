/** Prompt input plus inline planner questions. Disabled while a run is
 * in flight; unlocks when the final episode closes. */

import type { SessionStore } from '../sessionStore.js';

export class PromptPanel {
  readonly root: HTMLElement;
  private readonly input: HTMLTextAreaElement;
  private readonly send: HTMLButtonElement;
  private readonly question: HTMLElement;
  private readonly answerInput: HTMLInputElement;
  private readonly answerSend: HTMLButtonElement;
  private readonly status: HTMLElement;

  constructor(private readonly store: SessionStore, doc: Document = document) {
    this.root = doc.createElement('section');
    this.root.className = 'prompt-panel';

    this.input = doc.createElement('textarea');
    this.input.placeholder = 'Describe what to build or change...';
    this.send = doc.createElement('button');
    this.send.textContent = 'Send';
    this.send.addEventListener('click', () => void this.submit());

    this.question = doc.createElement('div');
    this.question.className = 'clarify-question';
    this.question.hidden = true;
    this.answerInput = doc.createElement('input');
    this.answerInput.placeholder = 'Answer the question...';
    this.answerSend = doc.createElement('button');
    this.answerSend.textContent = 'Reply';
    this.answerSend.addEventListener('click', () => void this.answer());

    this.status = doc.createElement('div');
    this.status.className = 'prompt-status';

    const answerRow = doc.createElement('div');
    answerRow.className = 'answer-row';
    answerRow.append(this.answerInput, this.answerSend);
    this.question.append(doc.createElement('div'), answerRow);

    this.root.append(this.input, this.send, this.question, this.status);
    store.subscribe(() => this.render());
    this.render();
  }

  private async submit(): Promise<void> {
    const text = this.input.value.trim();
    if (!text) {
      this.status.textContent = 'Type a prompt first.';
      return; // blocked client-side; nothing hits the network
    }
    try {
      await this.store.submitPrompt(text);
      this.input.value = '';
    } catch (err) {
      this.status.textContent = String(err instanceof Error ? err.message : err);
    }
  }

  private async answer(): Promise<void> {
    const text = this.answerInput.value.trim();
    if (!text) {
      this.status.textContent = 'Type an answer first.';
      return;
    }
    try {
      await this.store.answerQuestion(text);
      this.answerInput.value = '';
    } catch (err) {
      this.status.textContent = String(err instanceof Error ? err.message : err);
    }
  }

  private render(): void {
    const { phase, trace, notice } = this.store.state;
    const busy = phase !== 'idle';
    this.input.disabled = busy;
    this.send.disabled = busy;
    this.question.hidden = phase !== 'awaiting_answer';
    if (phase === 'awaiting_answer' && trace.clarifyQuestion !== null) {
      (this.question.firstChild as HTMLElement).textContent = trace.clarifyQuestion;
    }
    this.status.textContent =
      notice ?? (phase === 'running' ? 'Working...' : phase === 'awaiting_answer' ? 'The planner needs an answer.' : '');
  }
}
