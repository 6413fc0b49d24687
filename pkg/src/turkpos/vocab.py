"""Word/tag ↔ integer id maps with reserved PAD and OOV slots.

Word id 0 is the padding sentinel and id 1 the out-of-vocabulary sentinel;
real words start at 2. Tag id 0 is the "-PAD-" sentinel; real tags start
at 1. Ids are assigned in first-occurrence order over the training corpus,
which makes vocabulary construction deterministic.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import EmptyCorpus, IdOutOfRange, TooLong

PAD_WORD = "-PAD-"
OOV_WORD = "-OOV-"
PAD_TAG = "-PAD-"

PAD_WORD_ID = 0
OOV_WORD_ID = 1
PAD_TAG_ID = 0


@dataclass(frozen=True)
class Vocabulary:
    """Immutable bidirectional word and tag index."""

    id_to_word: list[str]
    id_to_tag: list[str]
    word_to_id: dict[str, int] = field(repr=False, default_factory=dict)
    tag_to_id: dict[str, int] = field(repr=False, default_factory=dict)

    def __post_init__(self):
        if self.id_to_word[:2] != [PAD_WORD, OOV_WORD]:
            raise ValueError("word list must start with the PAD and OOV sentinels")
        if self.id_to_tag[:1] != [PAD_TAG]:
            raise ValueError("tag list must start with the PAD sentinel")
        object.__setattr__(self, "word_to_id", {w: i for i, w in enumerate(self.id_to_word)})
        object.__setattr__(self, "tag_to_id", {t: i for i, t in enumerate(self.id_to_tag)})

    @property
    def n_words(self) -> int:
        return len(self.id_to_word)

    @property
    def n_tags(self) -> int:
        return len(self.id_to_tag)

    @property
    def real_tags(self) -> list[str]:
        """Tags assignable to tokens, i.e. everything but the PAD sentinel."""
        return self.id_to_tag[1:]


@dataclass(frozen=True)
class EncodedSentence:
    """Storage form of one sentence: padded id arrays plus the true length.

    Padding exists only here; the network always consumes the first
    true_length positions.
    """

    word_ids: list[int]
    tag_ids: list[int]
    true_length: int

    def __post_init__(self):
        if len(self.word_ids) != len(self.tag_ids):
            raise ValueError(
                f"{len(self.word_ids)} word ids vs {len(self.tag_ids)} tag ids"
            )
        if not 0 <= self.true_length <= len(self.word_ids):
            raise ValueError(f"true_length {self.true_length} out of range")
        tail_words = self.word_ids[self.true_length :]
        tail_tags = self.tag_ids[self.true_length :]
        if any(w != PAD_WORD_ID for w in tail_words) or any(
            t != PAD_TAG_ID for t in tail_tags
        ):
            raise ValueError("positions past true_length must hold PAD ids only")

    @classmethod
    def encode(cls, sentence, vocab: "Vocabulary", target_len: int) -> "EncodedSentence":
        """Encode a labeled sentence and right-pad it to target_len."""
        word_ids = encode_tokens([w for w, _ in sentence], vocab)
        tag_ids = [vocab.tag_to_id[t] for _, t in sentence]
        return cls(
            word_ids=pad_to(word_ids, target_len, PAD_WORD_ID),
            tag_ids=pad_to(tag_ids, target_len, PAD_TAG_ID),
            true_length=len(sentence),
        )


def build_vocabulary(corpus) -> Vocabulary:
    """Index every word and tag of a labeled corpus in first-occurrence order.

    `corpus` is a list of sentences, each a list of (token, tag) pairs.
    """
    if not corpus:
        raise EmptyCorpus("cannot build a vocabulary from an empty corpus")
    id_to_word = [PAD_WORD, OOV_WORD]
    id_to_tag = [PAD_TAG]
    seen_words = set(id_to_word)
    seen_tags = set(id_to_tag)
    for sentence in corpus:
        for word, tag in sentence:
            if word in (PAD_WORD, OOV_WORD) or tag == PAD_TAG:
                raise ValueError(
                    f"corpus entry ({word!r}, {tag!r}) collides with a reserved sentinel"
                )
            if word not in seen_words:
                seen_words.add(word)
                id_to_word.append(word)
            if tag not in seen_tags:
                seen_tags.add(tag)
                id_to_tag.append(tag)
    return Vocabulary(id_to_word=id_to_word, id_to_tag=id_to_tag)


def encode_tokens(tokens: list[str], vocab: Vocabulary) -> list[int]:
    """Map tokens to word ids; unknown words get the OOV id."""
    return [vocab.word_to_id.get(token, OOV_WORD_ID) for token in tokens]


def encode_tags(tags: list[str], vocab: Vocabulary) -> list[int]:
    """Map tag strings to tag ids; unknown tags are an error upstream."""
    return [vocab.tag_to_id[tag] for tag in tags]


def pad_to(ids: list[int], target_len: int, pad_id: int) -> list[int]:
    """Right-pad an id list to exactly target_len entries."""
    if len(ids) > target_len:
        raise TooLong(f"sequence of length {len(ids)} exceeds target {target_len}")
    return list(ids) + [pad_id] * (target_len - len(ids))


def longest_sentence(corpus) -> int:
    """Maximum token count over all sentences of a labeled corpus."""
    if not corpus:
        raise EmptyCorpus("empty corpus has no longest sentence")
    return max(len(sentence) for sentence in corpus)


def one_hot(tag_ids: list[int], n_tags: int) -> np.ndarray:
    """Encode tag ids as unit rows of an (len × n_tags) float matrix."""
    out = np.zeros((len(tag_ids), n_tags), dtype=np.float64)
    for row, tag_id in enumerate(tag_ids):
        if not 0 <= tag_id < n_tags:
            raise IdOutOfRange(f"tag id {tag_id} outside [0, {n_tags})")
        out[row, tag_id] = 1.0
    return out
