// Shapes served by the engine's HTTP API. Field names mirror the JSON
// payloads exactly; nothing here is console-invented.

export interface Profile {
  id: number;
  name: string;
  description: string;
}

export interface ExplanationRecord {
  version: number;
  id: string;
  profile: number;
  observation: number[];
  choices: [number, number][];
  prompt: string;
  backend: string;
  explanation: string;
  plan_id: string;
  created_at: string;
  ledger_sequence: number;
  feedback: string | null;
}

export interface PolicyChoiceRow {
  observation: number[];
  options: [number, number][];
}

export interface PolicySnapshot {
  profile: number;
  value: number;
  choices: PolicyChoiceRow[];
  provenance: {
    ledger_sequence: number;
    model_hash: string;
    params_hash: string;
  };
}

export interface SkillBelief {
  skill: string;
  levels: string[];
  posterior: number[];
}

export interface BeliefView {
  profile: number;
  observation: number[];
  beliefs: SkillBelief[];
}

export interface EngineEvent {
  sequence: number;
  kind: string;
  at: string;
  payload: Record<string, unknown>;
}

export type Verdict = "accepted" | "rejected";
