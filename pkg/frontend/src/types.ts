/** Wire types mirrored from the service JSON schema. */

export type Stage =
  | 'analysis'
  | 'plan'
  | 'clarify'
  | 'skills'
  | 'build_attempt'
  | 'inspect_verdict'
  | 'execute'
  | 'episode_closed'
  | 'error';

export interface PipelineEvent {
  session: string;
  sequence: number;
  stage: Stage;
  payload: Record<string, unknown>;
  timestamp: number;
}

export interface Snapshot {
  hierarchy: string; // JSON text of the nested entity document
  clock: number;
  scene_hash: string;
}

export interface BehaviorDoc {
  kind: 'spin' | 'orbit' | 'oscillate' | 'follow' | string;
  [param: string]: unknown;
}

export interface EntityDoc {
  name: string;
  shape: string;
  position: [number, number, number];
  rotation: [number, number, number];
  scale: [number, number, number];
  color: string; // #RRGGBB
  behaviors: BehaviorDoc[];
  handlers: string[];
  children: EntityDoc[];
}

export interface GenerationInfo {
  id: string;
  summary: string;
  created_at: number;
  origin_session: string;
}

export interface EventsBackfill {
  events: PipelineEvent[];
  running: boolean;
  pending_question: string | null;
}
