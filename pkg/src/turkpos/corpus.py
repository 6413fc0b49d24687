"""Labeled-corpus file format: one `token<TAB>tag` per line.

A blank line terminates a sentence; lines starting with `#` are comments.
The loader applies no preprocessing — corpora are stored post-cleaning.
"""

from pathlib import Path

Sentence = list[tuple[str, str]]


def parse_corpus(text: str) -> list[Sentence]:
    """Parse corpus-format text into sentences of (token, tag) pairs."""
    sentences: list[Sentence] = []
    current: Sentence = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if line.startswith("#"):
            continue
        if not line.strip():
            if current:
                sentences.append(current)
                current = []
            continue
        parts = line.split("\t")
        if len(parts) != 2 or not parts[0] or not parts[1]:
            raise ValueError(f"line {lineno}: expected 'token<TAB>tag', got {line!r}")
        current.append((parts[0], parts[1]))
    if current:
        sentences.append(current)
    return sentences


def format_corpus(sentences: list[Sentence]) -> str:
    """Render sentences in corpus format, blank line between sentences."""
    blocks = []
    for sentence in sentences:
        blocks.append("\n".join(f"{token}\t{tag}" for token, tag in sentence))
    return "\n\n".join(blocks) + ("\n" if blocks else "")


def read_corpus(path: str | Path) -> list[Sentence]:
    return parse_corpus(Path(path).read_text(encoding="utf-8"))


def write_corpus(sentences: list[Sentence], path: str | Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(format_corpus(sentences), encoding="utf-8")


def sample_corpus_path() -> Path:
    """Path of the shipped 5-tag synthetic training corpus."""
    return Path(__file__).parent / "data" / "sample_corpus.tsv"


def load_sample_corpus() -> list[Sentence]:
    return read_corpus(sample_corpus_path())
