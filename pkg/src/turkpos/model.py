"""Bidirectional LSTM tagging model.

Per token t the model embeds the word id, runs one LSTM over the sentence
in each time direction, concatenates the two hidden states and projects:

    y_t = softmax(W_y [a_fwd_t; a_bwd_t] + b_y)

Sequences are always processed at their true length; padding exists only
in stored batches and never enters the computation graph, so predictions
cannot depend on the padding amount.
"""

from dataclasses import dataclass

import numpy as np

from .errors import AllMasked, DimensionMismatch, IdOutOfRange, InvalidEpsilon
from .lstm import (
    PARAM_FIELDS,
    LstmParams,
    lstm_sequence_backward,
    lstm_sequence_forward,
)
from .vocab import Vocabulary, build_vocabulary

PROB_FLOOR = 1e-12


@dataclass
class OutputParams:
    W_y: np.ndarray  # n_tags × 2*hidden_dim
    b_y: np.ndarray  # n_tags


@dataclass
class BlstmModel:
    embedding: np.ndarray  # vocab_size × embed_dim; row 0 PAD, row 1 OOV
    forward_lstm: LstmParams
    backward_lstm: LstmParams
    output: OutputParams
    vocab: Vocabulary

    @property
    def embed_dim(self) -> int:
        return self.embedding.shape[1]

    @property
    def hidden_dim(self) -> int:
        return self.forward_lstm.hidden_dim

    @property
    def n_tags(self) -> int:
        return self.output.W_y.shape[0]

    def parameters(self) -> dict[str, np.ndarray]:
        """All parameter arrays, in the fixed serialization order."""
        params = {"embedding": self.embedding}
        for prefix, lstm in (("forward", self.forward_lstm), ("backward", self.backward_lstm)):
            for name in PARAM_FIELDS:
                params[f"{prefix}.{name}"] = getattr(lstm, name)
        params["output.W_y"] = self.output.W_y
        params["output.b_y"] = self.output.b_y
        return params


def _glorot(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    r = np.sqrt(6.0 / (rows + cols))
    return rng.uniform(-r, r, size=(rows, cols))


def _init_lstm(rng: np.random.Generator, hidden_dim: int, input_dim: int) -> LstmParams:
    z = hidden_dim + input_dim
    weights = [_glorot(rng, hidden_dim, z) for _ in range(4)]
    biases = [np.zeros(hidden_dim) for _ in range(4)]
    biases[0] += 1.0  # forget-gate bias: retain memory early in training
    return LstmParams(*weights, *biases)


def init_model(
    vocab: Vocabulary,
    embed_dim: int = 64,
    hidden_dim: int = 100,
    rng: np.random.Generator | None = None,
) -> BlstmModel:
    """Random model over a vocabulary. Pass a seeded rng for reproducibility."""
    if rng is None:
        rng = np.random.default_rng(0)
    embedding = _glorot(rng, vocab.n_words, embed_dim)
    embedding[0] = 0.0  # PAD row never enters computation; keep it inert
    forward_lstm = _init_lstm(rng, hidden_dim, embed_dim)
    backward_lstm = _init_lstm(rng, hidden_dim, embed_dim)
    output = OutputParams(
        W_y=_glorot(rng, vocab.n_tags, 2 * hidden_dim),
        b_y=np.zeros(vocab.n_tags),
    )
    return BlstmModel(embedding, forward_lstm, backward_lstm, output, vocab)


def softmax(z: np.ndarray, axis: int = -1) -> np.ndarray:
    """Numerically stable softmax via max subtraction."""
    z = np.asarray(z, dtype=np.float64)
    shifted = z - z.max(axis=axis, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=axis, keepdims=True)


class _ForwardPass:
    """Intermediate activations of one sentence, kept for the backward pass."""

    def __init__(self, word_ids, xs, hidden_fwd, caches_fwd, hidden_bwd, caches_bwd, merged, probs):
        self.word_ids = word_ids
        self.xs = xs
        self.hidden_fwd = hidden_fwd
        self.caches_fwd = caches_fwd
        self.hidden_bwd = hidden_bwd
        self.caches_bwd = caches_bwd
        self.merged = merged
        self.probs = probs


def _forward(word_ids: list[int], model: BlstmModel) -> _ForwardPass:
    ids = np.asarray(word_ids, dtype=np.intp)
    if ids.size and (ids.min() < 0 or ids.max() >= model.embedding.shape[0]):
        raise IdOutOfRange(f"a word id in {word_ids} is outside the vocabulary")
    xs = model.embedding[ids]
    hidden_fwd, caches_fwd = lstm_sequence_forward(xs, model.forward_lstm, "forward")
    hidden_bwd, caches_bwd = lstm_sequence_forward(xs, model.backward_lstm, "backward")
    merged = np.concatenate([hidden_fwd, hidden_bwd], axis=1)
    logits = merged @ model.output.W_y.T + model.output.b_y
    probs = softmax(logits, axis=1)
    return _ForwardPass(ids, xs, hidden_fwd, caches_fwd, hidden_bwd, caches_bwd, merged, probs)


def blstm_tag_probs(word_ids: list[int], model: BlstmModel) -> np.ndarray:
    """Per-token tag probabilities, shape (seq_len, n_tags), rows sum to 1."""
    return _forward(word_ids, model).probs


def batch_tag_probs(
    padded_word_ids: np.ndarray, lengths: list[int], model: BlstmModel
) -> list[np.ndarray]:
    """Probabilities for a padded batch: each row is sliced to its true length.

    The slice happens before any computation, so results are bitwise equal
    to tagging each sentence on its own.
    """
    out = []
    for row, length in zip(padded_word_ids, lengths):
        out.append(blstm_tag_probs(list(row[:length]), model))
    return out


def predict_tag_ids(probs: np.ndarray) -> tuple[list[int], list[float]]:
    """Argmax tags over the real classes (PAD column ignored), plus confidences.

    Ties break toward the lowest tag id.
    """
    best = probs[:, 1:].argmax(axis=1) + 1
    return [int(t) for t in best], [float(probs[row, t]) for row, t in enumerate(best)]


def masked_cross_entropy(probs: np.ndarray, targets: np.ndarray, mask: np.ndarray) -> float:
    """Mean negative log-likelihood over positions where mask is true.

    `targets` is one-hot, shape-matching `probs`; probabilities are
    floored at 1e-12 before the log.
    """
    probs = np.asarray(probs, dtype=np.float64)
    targets = np.asarray(targets, dtype=np.float64)
    mask = np.asarray(mask, dtype=bool)
    if probs.shape != targets.shape or mask.shape != (probs.shape[0],):
        raise DimensionMismatch(
            f"probs {probs.shape}, targets {targets.shape}, mask {mask.shape} disagree"
        )
    m = int(mask.sum())
    if m == 0:
        raise AllMasked("loss over zero real positions is undefined")
    gold_p = (probs[mask] * targets[mask]).sum(axis=1)
    return float(-np.log(np.maximum(gold_p, PROB_FLOOR)).sum() / m)


def _sum_loss_and_grads(
    word_ids: list[int], gold_tag_ids: list[int], model: BlstmModel
) -> tuple[float, int, dict[str, np.ndarray]]:
    """NLL summed over all positions of a true-length sentence, plus exact
    gradients of that sum w.r.t. every parameter."""
    if len(word_ids) != len(gold_tag_ids):
        raise DimensionMismatch(
            f"{len(word_ids)} word ids vs {len(gold_tag_ids)} gold tags"
        )
    fp = _forward(word_ids, model)
    n = len(word_ids)
    n_tags = model.n_tags
    gold = np.asarray(gold_tag_ids, dtype=np.intp)
    if n and (gold.min() < 0 or gold.max() >= n_tags):
        raise IdOutOfRange(f"a gold tag id in {gold_tag_ids} is outside [0, {n_tags})")

    gold_p = fp.probs[np.arange(n), gold]
    nll = float(-np.log(np.maximum(gold_p, PROB_FLOOR)).sum())

    # Softmax + cross-entropy pair: d(logits) = probs - onehot(gold).
    d_logits = fp.probs.copy()
    d_logits[np.arange(n), gold] -= 1.0

    d_W_y = d_logits.T @ fp.merged
    d_b_y = d_logits.sum(axis=0)
    d_merged = d_logits @ model.output.W_y
    h = model.hidden_dim
    grads_fwd, d_x_fwd = lstm_sequence_backward(
        d_merged[:, :h], fp.caches_fwd, model.forward_lstm, "forward"
    )
    grads_bwd, d_x_bwd = lstm_sequence_backward(
        d_merged[:, h:], fp.caches_bwd, model.backward_lstm, "backward"
    )
    d_embedding = np.zeros_like(model.embedding)
    np.add.at(d_embedding, fp.word_ids, d_x_fwd + d_x_bwd)

    grads = {"embedding": d_embedding}
    for prefix, lstm_grads in (("forward", grads_fwd), ("backward", grads_bwd)):
        for name in PARAM_FIELDS:
            grads[f"{prefix}.{name}"] = getattr(lstm_grads, name)
    grads["output.W_y"] = d_W_y
    grads["output.b_y"] = d_b_y
    return nll, n, grads


def backward(
    word_ids: list[int],
    gold_tag_ids: list[int],
    mask: list[bool] | None,
    model: BlstmModel,
) -> dict[str, np.ndarray]:
    """Exact gradients of masked_cross_entropy w.r.t. every parameter.

    The mask must be a true-prefix (real positions first, padding after);
    padded positions are sliced off before the network runs, so they can
    contribute neither loss nor gradient, and the PAD embedding row never
    receives gradient.
    """
    if mask is None:
        mask = [True] * len(word_ids)
    mask_arr = np.asarray(mask, dtype=bool)
    if mask_arr.shape != (len(word_ids),):
        raise DimensionMismatch(f"mask length {mask_arr.shape} vs {len(word_ids)} ids")
    m = int(mask_arr.sum())
    if m == 0:
        raise AllMasked("no real positions to differentiate")
    if not mask_arr[:m].all():
        raise DimensionMismatch("mask must mark a contiguous true prefix (PAD is trailing)")
    nll, count, grads = _sum_loss_and_grads(list(word_ids[:m]), list(gold_tag_ids[:m]), model)
    for arr in grads.values():
        arr /= count
    return grads


def gradient_check(
    model: BlstmModel, batch: list[tuple[list[int], list[int]]], eps: float = 1e-5
) -> float:
    """Compare analytic gradients to central finite differences.

    Returns the max over every scalar parameter of
    |g_analytic − g_numeric| / max(|g_analytic| + |g_numeric|, 1e-12).
    Intended for small models (≲ a few hundred parameters).
    """
    if eps <= 0:
        raise InvalidEpsilon(f"finite-difference step must be > 0, got {eps}")

    def batch_loss() -> float:
        total_nll, total_tokens = 0.0, 0
        for word_ids, gold_ids in batch:
            nll, count, _ = _sum_loss_and_grads(word_ids, gold_ids, model)
            total_nll += nll
            total_tokens += count
        return total_nll / total_tokens

    analytic: dict[str, np.ndarray] = {}
    total_tokens = 0
    for word_ids, gold_ids in batch:
        _, count, grads = _sum_loss_and_grads(word_ids, gold_ids, model)
        total_tokens += count
        for name, g in grads.items():
            analytic[name] = analytic.get(name, 0.0) + g
    for name in analytic:
        analytic[name] = analytic[name] / total_tokens

    worst = 0.0
    for name, arr in model.parameters().items():
        g_arr = analytic[name]
        for idx in np.ndindex(arr.shape):
            original = arr[idx]
            arr[idx] = original + eps
            loss_plus = batch_loss()
            arr[idx] = original - eps
            loss_minus = batch_loss()
            arr[idx] = original
            numeric = (loss_plus - loss_minus) / (2.0 * eps)
            g = g_arr[idx]
            rel = abs(g - numeric) / max(abs(g) + abs(numeric), 1e-12)
            worst = max(worst, rel)
    return worst


def gradcheck_fixture(seed: int = 0) -> tuple[BlstmModel, list[tuple[list[int], list[int]]]]:
    """Small seeded model (3 words, embed 3, hidden 4, 3 real tags) and a
    one-sentence batch, sized so gradient_check runs in well under a second."""
    corpus = [[("ev", "T1"), ("su", "T2"), ("at", "T3")]]
    vocab = build_vocabulary(corpus)
    rng = np.random.default_rng(seed)
    model = init_model(vocab, embed_dim=3, hidden_dim=4, rng=rng)
    batch = [([2, 3, 4], [1, 2, 3])]
    return model, batch
