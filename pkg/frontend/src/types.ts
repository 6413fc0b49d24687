// Shapes of the turkpos HTTP API payloads.

export type SentenceResult = {
  tokens: string[];
  tags: string[];
  confidences: number[];
  oov: boolean[];
};

export type AnalysisResult = {
  source: "text" | "document";
  filename: string | null;
  sentences: SentenceResult[];
  // tag -> [word, count] pairs, already sorted by the server
  frequencies: Record<string, [string, number][]>;
};

export type AnalysisRecord = {
  id: string;
  created_at: number;
  source: "text" | "document";
  input_hash: string;
  model_version: string;
  result: AnalysisResult;
};

export type CorrectionAck = {
  id: string;
  analysis_id: string;
  sentence_index: number;
  token_index: number;
  original_tag: string;
  corrected_tag: string;
  submitted_at: number;
};

export type TagsetResponse = {
  tags: string[];
  model_version: string;
};

export type RetrainStatus = {
  status: "idle" | "running" | "completed" | "failed";
  error: string | null;
  started_at: number | null;
  finished_at: number | null;
  model_version: string | null;
};
