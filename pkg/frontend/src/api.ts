/** Thin client over the session service: commands via fetch, events via SSE.
 *
 * The SSE reader parses a fetch body stream directly so it works both in
 * browsers and under node-based tests without an EventSource global.
 */

import type { EventsBackfill, GenerationInfo, PipelineEvent, Snapshot } from './types.js';

export class ApiError extends Error {
  constructor(readonly status: number, message: string) {
    super(message);
  }
}

async function jsonOrThrow<T>(resp: Response): Promise<T> {
  if (!resp.ok) {
    let detail = resp.statusText;
    try {
      const body = (await resp.json()) as { detail?: unknown };
      if (body.detail !== undefined) detail = JSON.stringify(body.detail);
    } catch {
      /* non-JSON error body */
    }
    throw new ApiError(resp.status, detail);
  }
  return (await resp.json()) as T;
}

export class ApiClient {
  constructor(readonly baseUrl: string) {}

  private url(path: string): string {
    return `${this.baseUrl}${path}`;
  }

  async createSession(
    config = 'full LLMR',
    sceneFile?: string,
    enablePlanner?: boolean,
  ): Promise<string> {
    const body: Record<string, unknown> = { config };
    if (sceneFile !== undefined) body.scene_file = sceneFile;
    if (enablePlanner !== undefined) body.enable_planner = enablePlanner;
    const resp = await fetch(this.url('/sessions'), {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify(body),
    });
    const data = await jsonOrThrow<{ session_id: string }>(resp);
    return data.session_id;
  }

  async submitPrompt(session: string, text: string): Promise<void> {
    await jsonOrThrow(
      await fetch(this.url(`/sessions/${session}/prompt`), {
        method: 'POST',
        headers: { 'content-type': 'application/json' },
        body: JSON.stringify({ text }),
      }),
    );
  }

  async respond(session: string, answer: string): Promise<void> {
    await jsonOrThrow(
      await fetch(this.url(`/sessions/${session}/respond`), {
        method: 'POST',
        headers: { 'content-type': 'application/json' },
        body: JSON.stringify({ answer }),
      }),
    );
  }

  async eventsBackfill(session: string, fromSequence = 0): Promise<EventsBackfill> {
    const resp = await fetch(
      this.url(`/sessions/${session}/events.json?from_sequence=${fromSequence}`),
    );
    return jsonOrThrow<EventsBackfill>(resp);
  }

  async snapshot(session: string): Promise<Snapshot> {
    return jsonOrThrow<Snapshot>(await fetch(this.url(`/sessions/${session}/snapshot`)));
  }

  async interact(session: string, name: string): Promise<void> {
    await jsonOrThrow(
      await fetch(this.url(`/sessions/${session}/interact`), {
        method: 'POST',
        headers: { 'content-type': 'application/json' },
        body: JSON.stringify({ name }),
      }),
    );
  }

  async listGenerations(session: string): Promise<GenerationInfo[]> {
    const data = await jsonOrThrow<{ generations: GenerationInfo[] }>(
      await fetch(this.url(`/sessions/${session}/generations`)),
    );
    return data.generations;
  }

  async saveGeneration(session: string, summary: string, episode: number): Promise<string> {
    const data = await jsonOrThrow<{ generation_id: string }>(
      await fetch(this.url(`/sessions/${session}/generations`), {
        method: 'POST',
        headers: { 'content-type': 'application/json' },
        body: JSON.stringify({ summary, episode }),
      }),
    );
    return data.generation_id;
  }

  async reloadGeneration(session: string, genId: string): Promise<{ status: string }> {
    return jsonOrThrow(
      await fetch(this.url(`/sessions/${session}/generations/${genId}/reload`), {
        method: 'POST',
      }),
    );
  }

  /**
   * Subscribe to the SSE event stream. Returns an abort function. Events
   * are delivered in order; `onIdle` fires when the server closes an
   * `until_idle` stream.
   */
  streamEvents(
    session: string,
    fromSequence: number,
    onEvent: (event: PipelineEvent) => void,
    options: { untilIdle?: boolean; onIdle?: () => void; onError?: (err: unknown) => void } = {},
  ): () => void {
    const controller = new AbortController();
    const untilIdle = options.untilIdle ? '&until_idle=true' : '';
    const run = async () => {
      const resp = await fetch(
        this.url(`/sessions/${session}/events?from_sequence=${fromSequence}${untilIdle}`),
        { signal: controller.signal },
      );
      if (!resp.ok || resp.body === null) {
        throw new ApiError(resp.status, 'event stream unavailable');
      }
      const reader = resp.body.getReader();
      const decoder = new TextDecoder();
      let buffer = '';
      for (;;) {
        const { done, value } = await reader.read();
        if (done) break;
        buffer += decoder.decode(value, { stream: true });
        let sep;
        while ((sep = buffer.indexOf('\n\n')) >= 0) {
          const frame = buffer.slice(0, sep);
          buffer = buffer.slice(sep + 2);
          handleFrame(frame);
        }
      }
      options.onIdle?.();
    };
    const handleFrame = (frame: string) => {
      let eventName = 'message';
      const dataLines: string[] = [];
      for (const line of frame.split('\n')) {
        if (line.startsWith('event: ')) eventName = line.slice(7).trim();
        else if (line.startsWith('data: ')) dataLines.push(line.slice(6));
      }
      if (eventName === 'idle') return; // stream is about to close
      if (dataLines.length === 0) return; // keepalive comment
      const parsed = JSON.parse(dataLines.join('\n')) as PipelineEvent;
      if (typeof parsed.sequence === 'number') onEvent(parsed);
    };
    run().catch((err) => {
      if (!controller.signal.aborted) options.onError?.(err);
    });
    return () => controller.abort();
  }
}
