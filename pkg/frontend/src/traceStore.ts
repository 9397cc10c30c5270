/** Fold pipeline events into per-step trace cards.
 *
 * Pure reduction over PipelineEvent records: the view layer renders the
 * result verbatim and never re-infers anything the server did not say.
 */

import type { PipelineEvent } from './types.js';

export interface AttemptView {
  attempt: number;
  code: string | null;
  error?: string;
  verdict?: 'pass' | 'fail';
  source?: string;
  suggestion?: string;
}

export interface StepCard {
  step: number;
  instruction?: string;
  summary?: string;
  relevantEntities: string[];
  skills: string[];
  attempts: AttemptView[];
  status?: string;
  executeErrors: string[];
  duration?: number;
  unverified?: boolean;
  final?: boolean;
}

export interface TraceState {
  plan: string[];
  clarifyQuestion: string | null;
  steps: StepCard[];
  errors: string[];
  lastSequence: number;
}

export function emptyTrace(): TraceState {
  return { plan: [], clarifyQuestion: null, steps: [], errors: [], lastSequence: -1 };
}

function currentStep(state: TraceState): StepCard {
  if (state.steps.length === 0 || state.steps[state.steps.length - 1]!.status !== undefined) {
    state.steps.push({
      step: state.steps.length + 1,
      relevantEntities: [],
      skills: [],
      attempts: [],
      executeErrors: [],
    });
  }
  return state.steps[state.steps.length - 1]!;
}

/** Apply one event; ignores duplicates/out-of-order by sequence number. */
export function applyEvent(state: TraceState, event: PipelineEvent): TraceState {
  if (event.sequence <= state.lastSequence) return state;
  state.lastSequence = event.sequence;
  const p = event.payload as Record<string, any>;
  switch (event.stage) {
    case 'plan':
      state.plan = (p.steps as string[]) ?? [];
      state.clarifyQuestion = null;
      break;
    case 'clarify':
      state.clarifyQuestion = String(p.question ?? '');
      break;
    case 'analysis': {
      const step = currentStep(state);
      step.summary = String(p.summary ?? '');
      step.relevantEntities = (p.relevant_entities as string[]) ?? [];
      if (step.instruction === undefined && p.instruction) {
        step.instruction = String(p.instruction);
      }
      break;
    }
    case 'skills': {
      currentStep(state).skills = (p.selected as string[]) ?? [];
      break;
    }
    case 'build_attempt': {
      const step = currentStep(state);
      step.attempts.push({
        attempt: Number(p.attempt ?? step.attempts.length),
        code: (p.code as string | null) ?? null,
        error: p.error as string | undefined,
      });
      break;
    }
    case 'inspect_verdict': {
      const step = currentStep(state);
      const attempt = step.attempts.find((a) => a.attempt === Number(p.attempt));
      if (attempt) {
        attempt.verdict = p.verdict as 'pass' | 'fail';
        attempt.source = p.source as string;
        attempt.suggestion = p.suggestion as string;
      }
      break;
    }
    case 'execute': {
      const step = currentStep(state);
      step.executeErrors = (p.errors as string[]) ?? [];
      break;
    }
    case 'episode_closed': {
      const step = currentStep(state);
      step.status = String(p.status ?? '');
      step.instruction = step.instruction ?? (p.instruction as string | undefined);
      step.duration = p.duration as number | undefined;
      step.unverified = Boolean(p.unverified);
      step.final = Boolean(p.final);
      break;
    }
    case 'error':
      state.errors.push(String(p.message ?? 'unknown error'));
      break;
  }
  return state;
}

export function applyAll(state: TraceState, events: PipelineEvent[]): TraceState {
  for (const event of events) applyEvent(state, event);
  return state;
}

/** The attempt/verdict sequence across all steps, in order. */
export function attemptVerdictSequence(state: TraceState): Array<[number, string]> {
  const out: Array<[number, string]> = [];
  for (const step of state.steps) {
    for (const attempt of step.attempts) {
      out.push([attempt.attempt, attempt.verdict ?? (attempt.error ? 'no-code' : 'pending')]);
    }
  }
  return out;
}
