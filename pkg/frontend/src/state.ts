// View state for one displayed analysis and its staged corrections.
// Pure logic, no DOM: the invariants live here where they are testable.
//
// Rules enforced:
//  - a staged correction always references a token of the displayed analysis
//  - the corrected tag always differs from the displayed tag
//  - corrected tags come from the server tagset, never invented
//  - a staged correction leaves the list only by being acknowledged by the
//    server or explicitly discarded

import type { AnalysisRecord } from "./types";

export type StagedStatus = "staged" | "submitting" | "acknowledged" | "failed";

export type StagedCorrection = {
  key: string;
  sentenceIndex: number;
  tokenIndex: number;
  token: string;
  originalTag: string;
  correctedTag: string;
  status: StagedStatus;
  serverId?: string;
  error?: string;
};

export class CorrectionSession {
  private staged = new Map<string, StagedCorrection>();

  constructor(
    public readonly analysis: AnalysisRecord,
    public readonly tagset: string[],
  ) {}

  displayedTag(sentenceIndex: number, tokenIndex: number): string {
    return this.analysis.result.sentences[sentenceIndex].tags[tokenIndex];
  }

  getStaged(sentenceIndex: number, tokenIndex: number): StagedCorrection | undefined {
    return this.staged.get(`${sentenceIndex}:${tokenIndex}`);
  }

  list(): StagedCorrection[] {
    return [...this.staged.values()];
  }

  pending(): StagedCorrection[] {
    return this.list().filter((c) => c.status === "staged" || c.status === "failed");
  }

  hasUnresolved(): boolean {
    return this.list().some((c) => c.status !== "acknowledged");
  }

  /** Stage a correction; restaging the same token replaces the previous pick. */
  stage(sentenceIndex: number, tokenIndex: number, correctedTag: string): StagedCorrection {
    const sentences = this.analysis.result.sentences;
    if (sentenceIndex < 0 || sentenceIndex >= sentences.length) {
      throw new RangeError(`sentence index ${sentenceIndex} out of range`);
    }
    const sentence = sentences[sentenceIndex];
    if (tokenIndex < 0 || tokenIndex >= sentence.tokens.length) {
      throw new RangeError(`token index ${tokenIndex} out of range`);
    }
    if (!this.tagset.includes(correctedTag)) {
      throw new Error(`tag ${correctedTag} is not in the server tagset`);
    }
    const displayed = sentence.tags[tokenIndex];
    if (correctedTag === displayed) {
      throw new Error("corrected tag must differ from the displayed tag");
    }
    const existing = this.getStaged(sentenceIndex, tokenIndex);
    if (existing && existing.status === "acknowledged") {
      throw new Error("this token's correction was already accepted by the server");
    }
    const entry: StagedCorrection = {
      key: `${sentenceIndex}:${tokenIndex}`,
      sentenceIndex,
      tokenIndex,
      token: sentence.tokens[tokenIndex],
      originalTag: displayed,
      correctedTag,
      status: "staged",
    };
    this.staged.set(entry.key, entry);
    return entry;
  }

  /** Explicit user discard: the one allowed way out besides acknowledgment. */
  discard(key: string): void {
    this.staged.delete(key);
  }

  discardPending(): void {
    for (const c of this.list()) {
      if (c.status !== "acknowledged") this.staged.delete(c.key);
    }
  }

  markSubmitting(key: string): void {
    this.transition(key, "submitting");
  }

  markAcknowledged(key: string, serverId: string): void {
    const entry = this.transition(key, "acknowledged");
    entry.serverId = serverId;
  }

  markFailed(key: string, error: string): void {
    const entry = this.transition(key, "failed");
    entry.error = error;
  }

  private transition(key: string, status: StagedStatus): StagedCorrection {
    const entry = this.staged.get(key);
    if (!entry) throw new Error(`no staged correction ${key}`);
    entry.status = status;
    return entry;
  }
}

/** Render an analysis in the labeled-corpus TSV format (token<TAB>tag, blank
 * line between sentences) so exports re-load as training data. */
export function analysisToTsv(analysis: AnalysisRecord): string {
  const blocks = analysis.result.sentences.map((s) =>
    s.tokens.map((token, i) => `${token}\t${s.tags[i]}`).join("\n"),
  );
  return blocks.length ? blocks.join("\n\n") + "\n" : "";
}

/** Stable chip color index for a tag: its position in the server tagset. */
export function tagColorIndex(tag: string, tagset: string[]): number {
  const index = tagset.indexOf(tag);
  return index >= 0 ? index % 10 : 9;
}
