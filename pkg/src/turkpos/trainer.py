"""Mini-batch training with Adam, train/test splitting, evaluation metrics,
and merging of user corrections into the corpus.

Training is fully deterministic: all randomness (weight init, per-epoch
shuffles) flows from one seeded generator, so the same corpus and config
always produce bit-identical model files. Batches store padded arrays, but
each sentence is processed at its true length; gradients are averaged over
the batch's real tokens.
"""

import json
from dataclasses import dataclass, field, fields
from pathlib import Path

import numpy as np

from .errors import DanglingReference, EmptyCorpus, TooSmall, UnknownTag
from .model import (
    BlstmModel,
    _sum_loss_and_grads,
    blstm_tag_probs,
    init_model,
    predict_tag_ids,
)
from .vocab import OOV_WORD_ID, build_vocabulary, encode_tokens


@dataclass(frozen=True)
class TrainConfig:
    epochs: int = 50
    batch_size: int = 32
    learning_rate: float = 0.001
    adam_beta1: float = 0.9
    adam_beta2: float = 0.999
    adam_epsilon: float = 1e-8
    seed: int = 42
    split_ratio: float = 0.8
    embed_dim: int = 64
    hidden_dim: int = 100

    def __post_init__(self):
        if self.epochs < 1:
            raise ValueError(f"epochs must be ≥ 1, got {self.epochs}")
        if self.batch_size < 1:
            raise ValueError(f"batch_size must be ≥ 1, got {self.batch_size}")
        if self.learning_rate <= 0:
            raise ValueError(f"learning_rate must be > 0, got {self.learning_rate}")
        if not 0 < self.split_ratio < 1:
            raise ValueError(f"split_ratio must be in (0,1), got {self.split_ratio}")

    @classmethod
    def from_dict(cls, data: dict) -> "TrainConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown training config keys: {sorted(unknown)}")
        return cls(**data)

    @classmethod
    def from_file(cls, path: str | Path) -> "TrainConfig":
        """Read a training config from a JSON file.

        Accepts either a bare config object or a service config file with
        the settings under a "train" key (the two share one file format).
        """
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        if "train" in data and isinstance(data["train"], dict):
            data = data["train"]
        return cls.from_dict(data)


class Adam:
    """Adam updates over a named set of parameter arrays, in place."""

    def __init__(self, params: dict[str, np.ndarray], lr: float, beta1: float,
                 beta2: float, eps: float):
        self.params = params
        self.lr = lr
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.t = 0
        self.m = {name: np.zeros_like(p) for name, p in params.items()}
        self.v = {name: np.zeros_like(p) for name, p in params.items()}

    def step(self, grads: dict[str, np.ndarray]) -> None:
        self.t += 1
        b1, b2 = self.beta1, self.beta2
        for name, p in self.params.items():
            g = grads[name]
            self.m[name] = b1 * self.m[name] + (1 - b1) * g
            self.v[name] = b2 * self.v[name] + (1 - b2) * g * g
            m_hat = self.m[name] / (1 - b1**self.t)
            v_hat = self.v[name] / (1 - b2**self.t)
            p -= self.lr * m_hat / (np.sqrt(v_hat) + self.eps)


def train_test_split(corpus, ratio: float, seed: int):
    """Deterministic shuffled split: first ⌊ratio·N⌋ sentences train, rest test."""
    if len(corpus) < 2:
        raise TooSmall(f"need ≥ 2 sentences to split, got {len(corpus)}")
    order = np.random.default_rng(seed).permutation(len(corpus))
    cut = int(ratio * len(corpus))
    if cut == 0 or cut == len(corpus):
        raise TooSmall(f"ratio {ratio} leaves one side of the split empty")
    train = [corpus[i] for i in order[:cut]]
    test = [corpus[i] for i in order[cut:]]
    return train, test


def _encode_corpus(corpus, vocab):
    encoded = []
    for sentence in corpus:
        word_ids = encode_tokens([w for w, _ in sentence], vocab)
        tag_ids = [vocab.tag_to_id[t] for _, t in sentence]
        encoded.append((word_ids, tag_ids))
    return encoded


def train(corpus, config: TrainConfig) -> tuple[BlstmModel, list[float]]:
    """Train a fresh model; returns it plus the mean loss per epoch."""
    if not corpus:
        raise EmptyCorpus("cannot train on an empty corpus")
    rng = np.random.default_rng(config.seed)
    vocab = build_vocabulary(corpus)
    model = init_model(vocab, config.embed_dim, config.hidden_dim, rng)
    encoded = _encode_corpus(corpus, vocab)
    optimizer = Adam(
        model.parameters(),
        lr=config.learning_rate,
        beta1=config.adam_beta1,
        beta2=config.adam_beta2,
        eps=config.adam_epsilon,
    )
    loss_history = []
    for _ in range(config.epochs):
        order = rng.permutation(len(encoded))
        epoch_nll, epoch_tokens = 0.0, 0
        for start in range(0, len(order), config.batch_size):
            batch = [encoded[i] for i in order[start : start + config.batch_size]]
            grads: dict[str, np.ndarray] = {}
            batch_nll, batch_tokens = 0.0, 0
            for word_ids, tag_ids in batch:
                nll, count, sentence_grads = _sum_loss_and_grads(word_ids, tag_ids, model)
                batch_nll += nll
                batch_tokens += count
                for name, g in sentence_grads.items():
                    if name in grads:
                        grads[name] += g
                    else:
                        grads[name] = g
            for name in grads:
                grads[name] /= batch_tokens
            optimizer.step(grads)
            epoch_nll += batch_nll
            epoch_tokens += batch_tokens
        loss_history.append(epoch_nll / epoch_tokens)
    return model, loss_history


@dataclass
class TagMetrics:
    precision: float
    recall: float
    support: int


@dataclass
class EvalReport:
    token_accuracy: float
    per_tag: dict[str, TagMetrics]
    oov_accuracy: float  # accuracy over OOV tokens; NaN when none occur
    confusion: np.ndarray  # gold × predicted counts, full tagset incl. PAD
    tag_names: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "token_accuracy": self.token_accuracy,
            "oov_accuracy": self.oov_accuracy,
            "per_tag": {
                tag: {"precision": m.precision, "recall": m.recall, "support": m.support}
                for tag, m in self.per_tag.items()
            },
            "confusion": self.confusion.tolist(),
            "tag_names": self.tag_names,
        }

    def format_text(self) -> str:
        lines = [
            f"token accuracy : {self.token_accuracy:.4f}",
            f"oov accuracy   : "
            + (f"{self.oov_accuracy:.4f}" if not np.isnan(self.oov_accuracy) else "n/a (no OOV tokens)"),
            "",
            f"{'tag':<10} {'precision':>9} {'recall':>9} {'support':>8}",
        ]
        for tag, m in self.per_tag.items():
            lines.append(f"{tag:<10} {m.precision:>9.4f} {m.recall:>9.4f} {m.support:>8d}")
        return "\n".join(lines)


def evaluate(model: BlstmModel, corpus) -> EvalReport:
    """Greedy per-token evaluation against gold tags; PAD never counted."""
    if not corpus:
        raise EmptyCorpus("cannot evaluate on an empty corpus")
    vocab = model.vocab
    n_tags = model.n_tags
    confusion = np.zeros((n_tags, n_tags), dtype=np.int64)
    oov_total, oov_correct = 0, 0
    for sentence in corpus:
        for _, tag in sentence:
            if tag not in vocab.tag_to_id:
                raise UnknownTag(f"gold tag {tag!r} is not in the model tagset")
        word_ids = encode_tokens([w for w, _ in sentence], vocab)
        gold_ids = [vocab.tag_to_id[t] for _, t in sentence]
        predicted, _ = predict_tag_ids(blstm_tag_probs(word_ids, model))
        for word_id, gold, pred in zip(word_ids, gold_ids, predicted):
            confusion[gold, pred] += 1
            if word_id == OOV_WORD_ID:
                oov_total += 1
                oov_correct += int(gold == pred)
    total = int(confusion.sum())
    correct = int(np.trace(confusion))
    per_tag = {}
    for tag_id in range(1, n_tags):
        support = int(confusion[tag_id].sum())
        predicted_as = int(confusion[:, tag_id].sum())
        tp = int(confusion[tag_id, tag_id])
        per_tag[vocab.id_to_tag[tag_id]] = TagMetrics(
            precision=tp / predicted_as if predicted_as else 0.0,
            recall=tp / support if support else 0.0,
            support=support,
        )
    return EvalReport(
        token_accuracy=correct / total,
        per_tag=per_tag,
        oov_accuracy=oov_correct / oov_total if oov_total else float("nan"),
        confusion=confusion,
        tag_names=list(vocab.id_to_tag),
    )


@dataclass(frozen=True)
class Correction:
    """One persisted user edit of a predicted tag."""

    id: str
    analysis_id: str
    sentence_index: int
    token_index: int
    original_tag: str
    corrected_tag: str
    submitted_at: float


def merge_corrections(corpus, corrections: list[Correction], analyses) -> list:
    """Append each corrected analysis sentence to the corpus as labeled data.

    `analyses` maps analysis id → the TaggedDocument that was corrected.
    Duplicate corrections of the same (analysis, sentence, token) keep only
    the latest by timestamp, so merging is idempotent over a correction set.
    The input corpus is not mutated.
    """
    latest: dict[tuple[str, int, int], Correction] = {}
    for c in corrections:
        key = (c.analysis_id, c.sentence_index, c.token_index)
        kept = latest.get(key)
        if kept is None or c.submitted_at >= kept.submitted_at:
            latest[key] = c
    by_sentence: dict[tuple[str, int], list[Correction]] = {}
    for key, c in sorted(latest.items()):
        by_sentence.setdefault((c.analysis_id, c.sentence_index), []).append(c)

    merged = [list(sentence) for sentence in corpus]
    for (analysis_id, sentence_index), edits in sorted(by_sentence.items()):
        doc = analyses.get(analysis_id)
        if doc is None:
            raise DanglingReference(f"correction references unknown analysis {analysis_id!r}")
        sentence = doc.sentences[sentence_index]
        tags = list(sentence.tags)
        for c in edits:
            tags[c.token_index] = c.corrected_tag
        merged.append(list(zip(sentence.tokens, tags)))
    return merged
