"""End-to-end inference: raw text in, tagged document out.

The result carries, per sentence, the tokens, the predicted tags, the
winning probability of each tag (the correction UI surfaces uncertain
tokens with it) and an out-of-vocabulary flag per token, plus a per-tag
word-frequency summary over the whole document.
"""

import json
from collections import Counter
from dataclasses import dataclass

from .errors import EmptyAfterCleaning, UnsupportedFormat
from .corpus import format_corpus
from .model import BlstmModel, blstm_tag_probs, predict_tag_ids
from .preprocess import preprocess_document
from .vocab import OOV_WORD_ID, encode_tokens


@dataclass
class TaggedSentence:
    tokens: list[str]
    tags: list[str]
    confidences: list[float]
    oov: list[bool]


@dataclass
class TaggedDocument:
    sentences: list[TaggedSentence]
    frequencies: dict[str, list[tuple[str, int]]]
    source: str = "text"  # "text" | "document"
    filename: str | None = None


def compute_frequencies(doc: TaggedDocument) -> dict[str, list[tuple[str, int]]]:
    """Per-tag word counts, sorted by descending count then ascending word."""
    counts: dict[str, Counter] = {}
    for sentence in doc.sentences:
        for token, tag in zip(sentence.tokens, sentence.tags):
            counts.setdefault(tag, Counter())[token] += 1
    return {
        tag: sorted(counter.items(), key=lambda item: (-item[1], item[0]))
        for tag, counter in sorted(counts.items())
    }


def tag_text(
    text: str,
    model: BlstmModel,
    source: str = "text",
    filename: str | None = None,
) -> TaggedDocument:
    """Preprocess, tag every sentence at its true length, and summarize.

    The -PAD- class is never assignable: its probability is ignored in the
    per-token argmax. Ties break toward the lowest tag id.
    """
    sentences = preprocess_document(text)
    if not sentences:
        raise EmptyAfterCleaning("no tokens survived preprocessing")
    vocab = model.vocab
    tagged = []
    for tokens in sentences:
        word_ids = encode_tokens(tokens, vocab)
        probs = blstm_tag_probs(word_ids, model)
        tag_ids, confidences = predict_tag_ids(probs)
        tagged.append(
            TaggedSentence(
                tokens=tokens,
                tags=[vocab.id_to_tag[t] for t in tag_ids],
                confidences=confidences,
                oov=[word_id == OOV_WORD_ID for word_id in word_ids],
            )
        )
    doc = TaggedDocument(sentences=tagged, frequencies={}, source=source, filename=filename)
    doc.frequencies = compute_frequencies(doc)
    return doc


def document_to_dict(doc: TaggedDocument) -> dict:
    """The analysis result schema served over the API and exported as JSON."""
    return {
        "source": doc.source,
        "filename": doc.filename,
        "sentences": [
            {
                "tokens": s.tokens,
                "tags": s.tags,
                "confidences": s.confidences,
                "oov": s.oov,
            }
            for s in doc.sentences
        ],
        "frequencies": {
            tag: [[word, count] for word, count in pairs]
            for tag, pairs in doc.frequencies.items()
        },
    }


def document_from_dict(data: dict) -> TaggedDocument:
    return TaggedDocument(
        sentences=[
            TaggedSentence(
                tokens=list(s["tokens"]),
                tags=list(s["tags"]),
                confidences=list(s["confidences"]),
                oov=list(s["oov"]),
            )
            for s in data["sentences"]
        ],
        frequencies={
            tag: [(word, int(count)) for word, count in pairs]
            for tag, pairs in data["frequencies"].items()
        },
        source=data.get("source", "text"),
        filename=data.get("filename"),
    )


def export_analysis(doc: TaggedDocument, format: str = "tsv") -> bytes:
    """Render an analysis for download.

    "tsv" emits the labeled-corpus file format, so exports feed straight
    back into training; "structured" emits the analysis JSON schema.
    """
    if format == "tsv":
        sentences = [list(zip(s.tokens, s.tags)) for s in doc.sentences]
        return format_corpus(sentences).encode("utf-8")
    if format == "structured":
        return json.dumps(document_to_dict(doc), ensure_ascii=False, indent=2).encode("utf-8")
    raise UnsupportedFormat(f"unknown export format {format!r}; use 'tsv' or 'structured'")
