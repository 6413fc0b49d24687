// Controller: wires the API client, the correction session, and the DOM.

import { ApiClient, ApiError } from "./api";
import { renderAnalysis, renderCorrections, renderFrequencies } from "./render";
import { analysisToTsv, CorrectionSession } from "./state";
import type { AnalysisRecord } from "./types";

export type AppOptions = {
  confirmDiscard?: (message: string) => boolean;
  sleep?: (ms: number) => Promise<void>;
  download?: (filename: string, content: string) => void;
};

export type App = {
  analyzeText: (text: string) => Promise<void>;
  uploadDocument: (content: string, filename: string) => Promise<void>;
  submitCorrections: () => Promise<void>;
  retrain: () => Promise<void>;
  session: () => CorrectionSession | null;
};

const defaultSleep = (ms: number) => new Promise<void>((r) => setTimeout(r, ms));

function defaultDownload(filename: string, content: string): void {
  const blob = new Blob([content], { type: "text/tab-separated-values" });
  const url = URL.createObjectURL(blob);
  const link = document.createElement("a");
  link.href = url;
  link.download = filename;
  link.click();
  URL.revokeObjectURL(url);
}

export function initApp(root: HTMLElement, client: ApiClient, options: AppOptions = {}): App {
  const confirmDiscard = options.confirmDiscard ?? ((msg) => window.confirm(msg));
  const sleep = options.sleep ?? defaultSleep;
  const download = options.download ?? defaultDownload;

  root.innerHTML = `
    <header>
      <h1>turkpos</h1>
      <span id="model-version" class="muted"></span>
    </header>
    <div id="error-banner" class="error" hidden></div>
    <nav class="tabs">
      <button type="button" id="tab-text" class="active">Text analysis</button>
      <button type="button" id="tab-document">Document analysis</button>
    </nav>
    <section id="screen-text">
      <textarea id="text-input" rows="4" placeholder="Analiz edilecek metni girin…"></textarea>
      <button type="button" id="analyze">Analyze</button>
    </section>
    <section id="screen-document" hidden>
      <p class="muted">Plain-text files only (.txt); extract PDFs to text first.</p>
      <input type="file" id="file-input" accept=".txt,text/plain" />
      <button type="button" id="upload">Upload &amp; analyze</button>
    </section>
    <section id="result" hidden>
      <div class="result-header">
        <h2>Tagged tokens</h2>
        <button type="button" id="export-tsv">Export TSV</button>
      </div>
      <div id="chips"></div>
      <h2>Word frequencies per tag</h2>
      <div id="frequencies"></div>
    </section>
    <section id="corrections-panel">
      <h2>Corrections</h2>
      <div id="corrections"></div>
    </section>
    <section class="admin">
      <button type="button" id="retrain">Retrain with corrections</button>
      <span id="retrain-status" class="muted"></span>
    </section>
  `;

  const el = <T extends HTMLElement>(id: string) => root.querySelector<T>(`#${id}`)!;
  const errorBanner = el<HTMLDivElement>("error-banner");
  const chips = el<HTMLDivElement>("chips");
  const frequencies = el<HTMLDivElement>("frequencies");
  const correctionsBox = el<HTMLDivElement>("corrections");
  const versionLabel = el<HTMLSpanElement>("model-version");
  const retrainStatus = el<HTMLSpanElement>("retrain-status");

  let session: CorrectionSession | null = null;
  let tagset: string[] = [];

  function showError(err: unknown): void {
    errorBanner.hidden = false;
    errorBanner.textContent = err instanceof ApiError
      ? `Server rejected the request: ${err.detail}`
      : `Unexpected error: ${String(err)}`;
  }

  function clearError(): void {
    errorBanner.hidden = true;
    errorBanner.textContent = "";
  }

  function redraw(): void {
    if (!session) return;
    renderAnalysis(chips, session, { onStage: stage });
    renderFrequencies(frequencies, session.analysis);
    renderCorrections(correctionsBox, session, {
      onSubmit: () => void submitCorrections(),
      onDiscard: (key) => {
        session?.discard(key);
        redraw();
      },
    });
    el<HTMLElement>("result").hidden = false;
    versionLabel.textContent = `model ${session.analysis.model_version}`;
  }

  function stage(sentenceIndex: number, tokenIndex: number, tag: string): void {
    if (!session) return;
    try {
      session.stage(sentenceIndex, tokenIndex, tag);
      clearError();
    } catch (err) {
      showError(err);
    }
    redraw();
  }

  async function ensureTagset(): Promise<void> {
    if (!tagset.length) tagset = (await client.getTagset()).tags;
  }

  function replaceSession(analysis: AnalysisRecord): boolean {
    if (session && session.hasUnresolved()) {
      const ok = confirmDiscard(
        "You have unsubmitted corrections; analyzing new text discards them. Continue?",
      );
      if (!ok) return false;
    }
    session = new CorrectionSession(analysis, tagset);
    return true;
  }

  async function analyzeText(text: string): Promise<void> {
    clearError();
    try {
      await ensureTagset();
      const analysis = await client.analyzeText(text);
      if (replaceSession(analysis)) redraw();
    } catch (err) {
      showError(err);
    }
  }

  async function uploadDocument(content: string, filename: string): Promise<void> {
    clearError();
    try {
      await ensureTagset();
      const analysis = await client.uploadDocument(content, filename);
      if (replaceSession(analysis)) redraw();
    } catch (err) {
      showError(err);
    }
  }

  async function submitCorrections(): Promise<void> {
    if (!session) return;
    clearError();
    for (const c of session.pending()) {
      session.markSubmitting(c.key);
      redraw();
      try {
        const ack = await client.submitCorrection({
          analysis_id: session.analysis.id,
          sentence_index: c.sentenceIndex,
          token_index: c.tokenIndex,
          corrected_tag: c.correctedTag,
        });
        session.markAcknowledged(c.key, ack.id);
      } catch (err) {
        session.markFailed(c.key, err instanceof ApiError ? err.detail : String(err));
      }
      redraw();
    }
  }

  async function retrain(): Promise<void> {
    clearError();
    retrainStatus.textContent = "starting…";
    try {
      await client.startRetrain();
      let status = await client.retrainStatus();
      while (status.status === "running") {
        retrainStatus.textContent = "retraining…";
        await sleep(500);
        status = await client.retrainStatus();
      }
      if (status.status === "failed") {
        retrainStatus.textContent = `retrain failed: ${status.error}`;
        return;
      }
      retrainStatus.textContent = `retrain complete, model ${status.model_version}`;
      tagset = (await client.getTagset()).tags;
    } catch (err) {
      retrainStatus.textContent = "";
      showError(err);
    }
  }

  el<HTMLButtonElement>("tab-text").addEventListener("click", () => {
    el<HTMLElement>("screen-text").hidden = false;
    el<HTMLElement>("screen-document").hidden = true;
    el<HTMLButtonElement>("tab-text").classList.add("active");
    el<HTMLButtonElement>("tab-document").classList.remove("active");
  });
  el<HTMLButtonElement>("tab-document").addEventListener("click", () => {
    el<HTMLElement>("screen-text").hidden = true;
    el<HTMLElement>("screen-document").hidden = false;
    el<HTMLButtonElement>("tab-document").classList.add("active");
    el<HTMLButtonElement>("tab-text").classList.remove("active");
  });

  el<HTMLButtonElement>("analyze").addEventListener("click", () => {
    void analyzeText(el<HTMLTextAreaElement>("text-input").value);
  });

  el<HTMLButtonElement>("upload").addEventListener("click", () => {
    const input = el<HTMLInputElement>("file-input");
    const file = input.files?.[0];
    if (!file) {
      showError(new Error("choose a .txt file first"));
      return;
    }
    if (file.type && !file.type.startsWith("text/")) {
      showError(new Error("only plain-text files are supported"));
      return;
    }
    void file.text().then((content) => uploadDocument(content, file.name));
  });

  el<HTMLButtonElement>("export-tsv").addEventListener("click", () => {
    if (session) download("analysis.tsv", analysisToTsv(session.analysis));
  });

  el<HTMLButtonElement>("retrain").addEventListener("click", () => void retrain());

  return {
    analyzeText,
    uploadDocument,
    submitCorrections,
    retrain,
    session: () => session,
  };
}

declare global {
  interface Window {
    __turkposTest?: boolean;
  }
}

if (typeof document !== "undefined" && !window.__turkposTest) {
  const root = document.getElementById("app");
  if (root) initApp(root, new ApiClient(""));
}
