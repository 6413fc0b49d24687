"""Shared test helpers: independent oracles and model constructors."""

import math

import numpy as np

from turkpos.lstm import LstmParams
from turkpos.model import BlstmModel, OutputParams, init_model
from turkpos.vocab import Vocabulary


def scalar_lstm_step(x, a_prev, c_prev, w, b):
    """Independent scalar oracle for one LSTM step.

    Everything is a plain float; `w` and `b` are dicts keyed f/u/c/o with
    (w_a, w_x) weight pairs and bias scalars. Uses only the math module.
    """
    sig = lambda v: 1.0 / (1.0 + math.exp(-v))
    za = lambda gate: w[gate][0] * a_prev + w[gate][1] * x + b[gate]
    f = sig(za("f"))
    i = sig(za("u"))
    c_bar = math.tanh(za("c"))
    c = i * c_bar + f * c_prev
    o = sig(za("o"))
    a = o * math.tanh(c)
    return a, c


def toy_vocab(n_words: int = 3, n_tags: int = 3) -> Vocabulary:
    """Vocabulary with n_words real words (w0..) and n_tags real tags (t0..)."""
    return Vocabulary(
        id_to_word=["-PAD-", "-OOV-"] + [f"w{i}" for i in range(n_words)],
        id_to_tag=["-PAD-"] + [f"t{i}" for i in range(n_tags)],
    )


def random_model(rng: np.random.Generator, n_words=None, n_tags=None,
                 embed_dim=None, hidden_dim=None) -> BlstmModel:
    """Small random model with randomized (but bounded) dimensions."""
    n_words = n_words or int(rng.integers(1, 8))
    n_tags = n_tags or int(rng.integers(2, 6))
    embed_dim = embed_dim or int(rng.integers(2, 6))
    hidden_dim = hidden_dim or int(rng.integers(2, 7))
    return init_model(toy_vocab(n_words, n_tags), embed_dim, hidden_dim, rng)


def swapped_model(model: BlstmModel) -> BlstmModel:
    """Exchange the direction parameter sets and the W_y column blocks."""
    h = model.hidden_dim
    w_y = np.concatenate([model.output.W_y[:, h:], model.output.W_y[:, :h]], axis=1)

    def copy_lstm(p: LstmParams) -> LstmParams:
        return LstmParams(*(getattr(p, n).copy() for n in
                            ("W_f", "W_u", "W_c", "W_o", "b_f", "b_u", "b_c", "b_o")))

    return BlstmModel(
        embedding=model.embedding.copy(),
        forward_lstm=copy_lstm(model.backward_lstm),
        backward_lstm=copy_lstm(model.forward_lstm),
        output=OutputParams(W_y=w_y, b_y=model.output.b_y.copy()),
        vocab=model.vocab,
    )
