// DOM construction for the analysis view. No server calls here; events are
// reported through the callbacks the controller passes in.

import { CorrectionSession, tagColorIndex } from "./state";
import type { AnalysisRecord } from "./types";

export type ChipHandlers = {
  onStage: (sentenceIndex: number, tokenIndex: number, tag: string) => void;
};

export function renderAnalysis(
  container: HTMLElement,
  session: CorrectionSession,
  handlers: ChipHandlers,
): void {
  container.textContent = "";
  session.analysis.result.sentences.forEach((sentence, s) => {
    const line = document.createElement("div");
    line.className = "sentence";
    sentence.tokens.forEach((token, t) => {
      line.appendChild(renderChip(session, s, t, token, handlers));
    });
    container.appendChild(line);
  });
}

function renderChip(
  session: CorrectionSession,
  sentenceIndex: number,
  tokenIndex: number,
  token: string,
  handlers: ChipHandlers,
): HTMLElement {
  const sentence = session.analysis.result.sentences[sentenceIndex];
  const tag = sentence.tags[tokenIndex];
  const confidence = sentence.confidences[tokenIndex];
  const staged = session.getStaged(sentenceIndex, tokenIndex);

  const chip = document.createElement("span");
  chip.className = `chip tag-c${tagColorIndex(tag, session.tagset)}`;
  chip.dataset.sentence = String(sentenceIndex);
  chip.dataset.token = String(tokenIndex);
  chip.title = `${tag} · confidence ${(confidence * 100).toFixed(1)}%`;

  const word = document.createElement("span");
  word.className = "chip-token";
  word.textContent = token;
  chip.appendChild(word);

  const tagLabel = document.createElement("span");
  tagLabel.className = "chip-tag";
  tagLabel.textContent = staged && staged.status !== "acknowledged"
    ? `${tag}→${staged.correctedTag}`
    : tag;
  chip.appendChild(tagLabel);

  if (sentence.oov[tokenIndex]) {
    const badge = document.createElement("span");
    badge.className = "oov-badge";
    badge.textContent = "OOV";
    badge.title = "out of vocabulary";
    chip.appendChild(badge);
  }
  if (staged) chip.classList.add(`staged-${staged.status}`);

  chip.addEventListener("click", () => {
    // one open picker at a time
    document.querySelectorAll(".tag-picker").forEach((el) => el.remove());
    chip.appendChild(renderTagPicker(session, sentenceIndex, tokenIndex, handlers));
  });
  return chip;
}

function renderTagPicker(
  session: CorrectionSession,
  sentenceIndex: number,
  tokenIndex: number,
  handlers: ChipHandlers,
): HTMLElement {
  const displayed = session.displayedTag(sentenceIndex, tokenIndex);
  const select = document.createElement("select");
  select.className = "tag-picker";
  const prompt = document.createElement("option");
  prompt.value = "";
  prompt.textContent = "correct to…";
  select.appendChild(prompt);
  for (const tag of session.tagset) {
    const option = document.createElement("option");
    option.value = tag;
    option.textContent = tag === displayed ? `${tag} (current)` : tag;
    // picking the displayed tag is not a correction
    option.disabled = tag === displayed;
    select.appendChild(option);
  }
  select.addEventListener("change", () => {
    if (select.value) handlers.onStage(sentenceIndex, tokenIndex, select.value);
    select.remove();
  });
  select.addEventListener("click", (event) => event.stopPropagation());
  return select;
}

export function renderFrequencies(container: HTMLElement, analysis: AnalysisRecord): void {
  container.textContent = "";
  const table = document.createElement("table");
  table.className = "freq-table";
  const head = table.insertRow();
  for (const label of ["tag", "word", "count"]) {
    const cell = document.createElement("th");
    cell.textContent = label;
    head.appendChild(cell);
  }
  for (const [tag, pairs] of Object.entries(analysis.result.frequencies)) {
    for (const [word, count] of pairs) {
      const row = table.insertRow();
      row.insertCell().textContent = tag;
      row.insertCell().textContent = word;
      row.insertCell().textContent = String(count);
    }
  }
  container.appendChild(table);
}

export function renderCorrections(
  container: HTMLElement,
  session: CorrectionSession | null,
  handlers: { onSubmit: () => void; onDiscard: (key: string) => void },
): void {
  container.textContent = "";
  const corrections = session ? session.list() : [];
  if (!corrections.length) {
    const empty = document.createElement("p");
    empty.className = "muted";
    empty.textContent = "No staged corrections. Click a token to correct its tag.";
    container.appendChild(empty);
    return;
  }
  const list = document.createElement("ul");
  list.className = "correction-list";
  for (const c of corrections) {
    const item = document.createElement("li");
    item.className = `correction ${c.status}`;
    item.dataset.key = c.key;
    const text = document.createElement("span");
    text.textContent = `"${c.token}" ${c.originalTag} → ${c.correctedTag}`;
    item.appendChild(text);
    const status = document.createElement("span");
    status.className = "correction-status";
    status.textContent =
      c.status === "acknowledged" ? `✓ saved (${c.serverId})`
      : c.status === "failed" ? `✗ ${c.error}`
      : c.status;
    item.appendChild(status);
    if (c.status !== "acknowledged") {
      const discard = document.createElement("button");
      discard.type = "button";
      discard.className = "discard";
      discard.textContent = "discard";
      discard.addEventListener("click", () => handlers.onDiscard(c.key));
      item.appendChild(discard);
    }
    list.appendChild(item);
  }
  container.appendChild(list);
  const pending = session ? session.pending().length : 0;
  const submit = document.createElement("button");
  submit.type = "button";
  submit.id = "submit-corrections";
  submit.textContent = pending ? `Submit ${pending} correction(s)` : "All corrections saved";
  submit.disabled = !pending;
  submit.addEventListener("click", handlers.onSubmit);
  container.appendChild(submit);
}
