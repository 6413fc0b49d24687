"""Normalization pipeline for raw Turkish text.

Raw text goes through three steps: Turkish-aware lowercasing, sentence
splitting on terminator punctuation, and token cleaning (strip edge
punctuation, drop digit-only and punctuation-only tokens). The composed
pipeline is `preprocess_document`.

The same cleaning is applied at training and inference time so the input
distribution the model sees never shifts.
"""

import re
import unicodedata

# Sentences end after one of these characters followed by whitespace or
# end of input. Naive on abbreviations ("dr.") by design: deterministic
# beats clever here, and tagging degrades gracefully on over-split input.
_TERMINATORS = ".!?…"
_SENTENCE_BOUNDARY = re.compile(r"(?<=[%s])\s+" % re.escape(_TERMINATORS))


def normalize_case(text: str) -> str:
    """Lowercase with Turkish case mapping: İ→i and I→ı.

    Applies NFC first so decomposed sequences (e.g. I + combining dot
    above) compare equal to their composed forms before the replacement
    table runs. All other characters follow standard Unicode lowercasing.
    """
    text = unicodedata.normalize("NFC", text)
    return text.replace("İ", "i").replace("I", "ı").lower()


def split_sentences(text: str) -> list[str]:
    """Split text into sentence segments after terminator punctuation.

    Terminators stay attached to their segment; the whitespace separator
    is dropped; empty segments are dropped.
    """
    segments = _SENTENCE_BOUNDARY.split(text)
    return [seg for seg in (s.strip() for s in segments) if seg]


def _is_punct(ch: str) -> bool:
    # Symbols (category S*) count as punctuation for cleaning purposes:
    # they carry no morphology and behave like stray marks in this corpus.
    return unicodedata.category(ch)[0] in ("P", "S")


def _clean_token(token: str) -> str:
    start, end = 0, len(token)
    while start < end and _is_punct(token[start]):
        start += 1
    while end > start and _is_punct(token[end - 1]):
        end -= 1
    return token[start:end]


def tokenize(sentence: str) -> list[str]:
    """Split on whitespace and clean each token.

    Leading/trailing punctuation is stripped (internal punctuation such as
    clitic apostrophes is kept); tokens that end up empty, digit-only, or
    punctuation-only are dropped. Case normalization is re-applied
    defensively so the output invariant holds for any caller.
    """
    sentence = normalize_case(sentence)
    tokens = []
    for raw in sentence.split():
        token = _clean_token(raw)
        if not token:
            continue
        if all(ch.isdigit() for ch in token):
            continue
        if all(_is_punct(ch) for ch in token):
            continue
        tokens.append(token)
    return tokens


def preprocess_document(text: str) -> list[list[str]]:
    """Full pipeline: lowercase, split into sentences, clean tokens.

    Sentences whose tokens are all dropped disappear from the output.
    """
    sentences = split_sentences(normalize_case(text))
    result = []
    for sentence in sentences:
        tokens = tokenize(sentence)
        if tokens:
            result.append(tokens)
    return result
