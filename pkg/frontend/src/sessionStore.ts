/** App state machine: one event-stream subscription, no optimistic UI.
 *
 * Every state change is driven by a server payload: events mutate the
 * trace, snapshots replace the scene, and the prompt panel unlocks only
 * when the server closes the final episode or asks a question.
 */

import type { ApiClient } from './api.js';
import type { GenerationInfo, PipelineEvent, Snapshot } from './types.js';
import { applyEvent, emptyTrace, type TraceState } from './traceStore.js';

export type Phase = 'idle' | 'running' | 'awaiting_answer';

export interface SessionState {
  session: string | null;
  phase: Phase;
  trace: TraceState;
  snapshot: Snapshot | null;
  generations: GenerationInfo[];
  selection: string | null;
  notice: string | null;
}

type Listener = (state: SessionState) => void;

export class SessionStore {
  readonly state: SessionState = {
    session: null,
    phase: 'idle',
    trace: emptyTrace(),
    snapshot: null,
    generations: [],
    selection: null,
    notice: null,
  };

  private listeners: Listener[] = [];
  private stopStream: (() => void) | null = null;

  constructor(private readonly api: ApiClient) {}

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  private notify(): void {
    for (const listener of this.listeners) listener(this.state);
  }

  async start(config = 'full LLMR', enablePlanner?: boolean): Promise<void> {
    this.state.session = await this.api.createSession(config, undefined, enablePlanner);
    await this.refreshSnapshot();
    await this.refreshGenerations();
    this.openStream(0);
    this.notify();
  }

  /** Attach to an existing session (e.g. reconnect): backfill then follow. */
  async attach(session: string): Promise<void> {
    this.state.session = session;
    const backfill = await this.api.eventsBackfill(session, 0);
    for (const event of backfill.events) this.onEvent(event, { silent: true });
    this.state.phase = backfill.pending_question !== null
      ? 'awaiting_answer'
      : backfill.running
        ? 'running'
        : 'idle';
    await this.refreshSnapshot();
    await this.refreshGenerations();
    this.openStream(this.state.trace.lastSequence + 1);
    this.notify();
  }

  private openStream(fromSequence: number): void {
    if (this.state.session === null) return;
    this.stopStream?.();
    this.stopStream = this.api.streamEvents(
      this.state.session,
      fromSequence,
      (event) => this.onEvent(event),
      { onError: (err) => this.setNotice(`event stream lost: ${String(err)}`) },
    );
  }

  close(): void {
    this.stopStream?.();
    this.stopStream = null;
  }

  private onEvent(event: PipelineEvent, opts: { silent?: boolean } = {}): void {
    applyEvent(this.state.trace, event);
    if (event.stage === 'clarify') {
      this.state.phase = 'awaiting_answer';
    } else if (event.stage === 'plan' && this.state.phase === 'awaiting_answer') {
      this.state.phase = 'running'; // the answer unblocked planning
    } else if (event.stage === 'episode_closed') {
      const payload = event.payload as { final?: boolean };
      if (payload.final) {
        this.state.phase = 'idle';
        void this.refreshSnapshot();
      } else {
        void this.refreshSnapshot();
      }
    } else if (event.stage === 'error') {
      this.state.phase = 'idle';
    }
    if (!opts.silent) this.notify();
  }

  async submitPrompt(text: string): Promise<void> {
    if (this.state.session === null) throw new Error('no session');
    if (this.state.phase !== 'idle') throw new Error('a run is already in flight');
    if (!text.trim()) throw new Error('prompt must be non-empty');
    this.state.trace = emptyTrace();
    await this.api.submitPrompt(this.state.session, text);
    this.state.phase = 'running';
    this.state.notice = null;
    this.notify();
  }

  async answerQuestion(answer: string): Promise<void> {
    if (this.state.session === null) throw new Error('no session');
    if (this.state.phase !== 'awaiting_answer') throw new Error('no question pending');
    if (!answer.trim()) throw new Error('answer must be non-empty');
    await this.api.respond(this.state.session, answer);
    // Phase flips to 'running' when the post-answer plan event arrives.
    this.notify();
  }

  async interact(name: string): Promise<void> {
    if (this.state.session === null) return;
    try {
      await this.api.interact(this.state.session, name);
      await this.refreshSnapshot();
    } catch (err) {
      this.setNotice(`interact failed: ${String(err)}`);
    }
    this.notify();
  }

  select(name: string | null): void {
    this.state.selection = name;
    this.notify();
  }

  async refreshSnapshot(): Promise<void> {
    if (this.state.session === null) return;
    this.state.snapshot = await this.api.snapshot(this.state.session);
    this.notify();
  }

  async refreshGenerations(): Promise<void> {
    if (this.state.session === null) return;
    this.state.generations = await this.api.listGenerations(this.state.session);
    this.notify();
  }

  async saveGeneration(summary: string, episode: number): Promise<void> {
    if (this.state.session === null) return;
    await this.api.saveGeneration(this.state.session, summary, episode);
    await this.refreshGenerations();
  }

  async reloadGeneration(genId: string): Promise<string> {
    if (this.state.session === null) throw new Error('no session');
    const result = await this.api.reloadGeneration(this.state.session, genId);
    await this.refreshSnapshot();
    return result.status;
  }

  private setNotice(text: string): void {
    this.state.notice = text;
    this.notify();
  }
}
